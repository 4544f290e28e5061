#pragma once

// Umbrella header for the domain-based classification library.

#include "domlearn/banana.hpp"
#include "domlearn/csv.hpp"
#include "domlearn/dataset.hpp"
#include "domlearn/distance.hpp"
#include "domlearn/evaluation.hpp"
#include "domlearn/experiment.hpp"
#include "domlearn/fldd.hpp"
#include "domlearn/geometry.hpp"
#include "domlearn/kernel_domain.hpp"
#include "domlearn/kernel_inequality.hpp"
#include "domlearn/kernels.hpp"
#include "domlearn/max_error_linear.hpp"
#include "domlearn/model.hpp"
#include "domlearn/model_io.hpp"
#include "domlearn/ncc.hpp"
#include "domlearn/negative_margin.hpp"
#include "domlearn/purity_tree.hpp"
#include "domlearn/rng.hpp"
#include "domlearn/soft_margin.hpp"
#include "domlearn/svg_plot.hpp"
