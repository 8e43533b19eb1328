#pragma once

// Everything except io.hpp, which additionally needs the nlohmann json header.

#include "bcmg/analysis.hpp"
#include "bcmg/blfa.hpp"
#include "bcmg/cases.hpp"
#include "bcmg/classification.hpp"
#include "bcmg/config.hpp"
#include "bcmg/discretization.hpp"
#include "bcmg/errors.hpp"
#include "bcmg/grid.hpp"
#include "bcmg/interpolation.hpp"
#include "bcmg/levelset.hpp"
#include "bcmg/mg_solver.hpp"
#include "bcmg/rng.hpp"
#include "bcmg/smoother.hpp"
#include "bcmg/transfer.hpp"
