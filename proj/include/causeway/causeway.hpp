#pragma once

// Causal structure discovery for sequential tabular data: constraint-based
// search with tiered prior knowledge, correlation-based feature reduction,
// linear-Gaussian synthetic data generation, and structure scoring.

#include "causeway/citest.hpp"
#include "causeway/clustering.hpp"
#include "causeway/dataset.hpp"
#include "causeway/error.hpp"
#include "causeway/eval.hpp"
#include "causeway/graph.hpp"
#include "causeway/graph_io.hpp"
#include "causeway/ingest.hpp"
#include "causeway/manifest.hpp"
#include "causeway/orientation_log.hpp"
#include "causeway/pc.hpp"
#include "causeway/synth.hpp"
