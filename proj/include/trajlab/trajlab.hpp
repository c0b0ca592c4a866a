#pragma once

#include "trajlab/arith.hpp"
#include "trajlab/builders.hpp"
#include "trajlab/classify.hpp"
#include "trajlab/coupling.hpp"
#include "trajlab/dfa.hpp"
#include "trajlab/error.hpp"
#include "trajlab/formula.hpp"
#include "trajlab/grid.hpp"
#include "trajlab/io.hpp"
#include "trajlab/nfa.hpp"
#include "trajlab/parikh.hpp"
#include "trajlab/patterns.hpp"
#include "trajlab/pda.hpp"
#include "trajlab/regex.hpp"
#include "trajlab/scc.hpp"
#include "trajlab/shuffle.hpp"
