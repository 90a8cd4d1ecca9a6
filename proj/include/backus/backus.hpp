#pragma once

#include "backus/common.hpp"
#include "backus/disk_poisson.hpp"
#include "backus/grids.hpp"
#include "backus/harmonic_ext.hpp"
#include "backus/kernels.hpp"
#include "backus/linearized.hpp"
#include "backus/nonlinear.hpp"
#include "backus/norms.hpp"
#include "backus/oracle.hpp"
#include "backus/poly.hpp"
#include "backus/spherical.hpp"
#include "backus/tabulated.hpp"
