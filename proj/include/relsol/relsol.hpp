#pragma once

#include "relsol/alignment.hpp"
#include "relsol/config.hpp"
#include "relsol/constants.hpp"
#include "relsol/error.hpp"
#include "relsol/evolution.hpp"
#include "relsol/fft.hpp"
#include "relsol/functionals.hpp"
#include "relsol/grid.hpp"
#include "relsol/groundstate.hpp"
#include "relsol/io.hpp"
#include "relsol/linops.hpp"
#include "relsol/petviashvili.hpp"
#include "relsol/random_fields.hpp"
#include "relsol/soliton.hpp"
#include "relsol/spectral.hpp"
#include "relsol/verify.hpp"
