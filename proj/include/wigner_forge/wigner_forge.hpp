#pragma once

#include "wigner_forge/array2d.hpp"
#include "wigner_forge/bloch.hpp"
#include "wigner_forge/ensembles.hpp"
#include "wigner_forge/error.hpp"
#include "wigner_forge/fftw.hpp"
#include "wigner_forge/grid.hpp"
#include "wigner_forge/hamlang.hpp"
#include "wigner_forge/lift.hpp"
#include "wigner_forge/moyal.hpp"
#include "wigner_forge/observables.hpp"
#include "wigner_forge/oracle.hpp"
#include "wigner_forge/state_io.hpp"
#include "wigner_forge/stationary.hpp"
