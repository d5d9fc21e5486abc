#pragma once

#include "hypermon/brute_force.hpp"
#include "hypermon/check.hpp"
#include "hypermon/error.hpp"
#include "hypermon/eval_cache.hpp"
#include "hypermon/formula.hpp"
#include "hypermon/kripke.hpp"
#include "hypermon/ltl_eval.hpp"
#include "hypermon/monitor.hpp"
#include "hypermon/qbf.hpp"
#include "hypermon/reductions.hpp"
#include "hypermon/selfcomp.hpp"
#include "hypermon/trace.hpp"
#include "hypermon/trace_log.hpp"
