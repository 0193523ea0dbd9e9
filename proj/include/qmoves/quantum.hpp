#pragma once

#include "qmoves/quantum/eigenstates.hpp"
#include "qmoves/quantum/evolve.hpp"
#include "qmoves/quantum/ground_state.hpp"
#include "qmoves/quantum/observables.hpp"
#include "qmoves/quantum/potential.hpp"
