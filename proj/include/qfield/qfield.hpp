#pragma once

#include "qfield/config.hpp"
#include "qfield/fock.hpp"
#include "qfield/hamiltonian.hpp"
#include "qfield/maxwell3d.hpp"
#include "qfield/medium.hpp"
#include "qfield/modes.hpp"
#include "qfield/observables.hpp"
#include "qfield/random.hpp"
#include "qfield/state_json.hpp"
#include "qfield/suite.hpp"
#include "qfield/verify.hpp"
