#pragma once

#include "cknlab/ckn_energy.hpp"
#include "cknlab/closed_forms.hpp"
#include "cknlab/core_params.hpp"
#include "cknlab/emden_fowler.hpp"
#include "cknlab/error.hpp"
#include "cknlab/io.hpp"
#include "cknlab/pohozaev.hpp"
#include "cknlab/radial_shooter.hpp"
#include "cknlab/serialize.hpp"
