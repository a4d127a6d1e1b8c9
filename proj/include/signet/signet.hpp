#pragma once

// Umbrella header: adversarial neighbor augmentation, signed-graph
// construction, and graph-regularized classifier training.

#include "signet/augment.hpp"
#include "signet/common.hpp"
#include "signet/dataset.hpp"
#include "signet/dfo.hpp"
#include "signet/geometry.hpp"
#include "signet/loss.hpp"
#include "signet/metrics.hpp"
#include "signet/mlp.hpp"
#include "signet/signed_graph.hpp"
#include "signet/svm.hpp"
#include "signet/trainer.hpp"
