#pragma once

#include <string>

namespace mgap {

// Catalog of every built-in ingredient a config can name: causal
// functionals, innovation families, example nets and true functions,
// with their declared constants. Entries are name-sorted and the text is
// byte-identical across invocations.
std::string registry_json_text();

}  // namespace mgap
