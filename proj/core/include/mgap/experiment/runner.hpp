#pragma once

#include "mgap/experiment/config.hpp"
#include "mgap/experiment/manifest.hpp"

namespace mgap {

// Runs the configured experiment end to end. Everything is computed in
// memory first; a single writer then emits the data files, the plots and
// finally the manifest. On failure every file this run created is removed
// before the error propagates, so a manifest on disk always marks a
// complete output directory.
RunManifest run_experiment(const ExperimentConfig& config);

}  // namespace mgap
