#pragma once

#include "algebra.hpp"
#include "batch.hpp"
#include "bench.hpp"
#include "errors.hpp"
#include "io.hpp"
#include "jet.hpp"
#include "metrics.hpp"
#include "problems.hpp"
#include "reference.hpp"
#include "series.hpp"
#include "taylor.hpp"
