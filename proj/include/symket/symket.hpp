// symket.hpp
// Convenience umbrella for the whole library.

#pragma once

#include "symket/hilbert.hpp"
#include "symket/cloning.hpp"
#include "symket/entanglement.hpp"
#include "symket/density.hpp"
#include "symket/report.hpp"
#include "symket/scenario.hpp"
