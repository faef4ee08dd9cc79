#pragma once

#include "classical.hpp"
#include "error.hpp"
#include "hermite.hpp"
#include "observables.hpp"
#include "ode.hpp"
#include "oscillator.hpp"
#include "pinney.hpp"
#include "quadrature.hpp"
#include "quantum_states.hpp"
