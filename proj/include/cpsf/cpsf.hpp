#pragma once

#include "cpsf/params.hpp"
#include "cpsf/linsys.hpp"
#include "cpsf/response.hpp"
#include "cpsf/stability.hpp"
#include "cpsf/opa.hpp"
#include "cpsf/noise.hpp"
#include "cpsf/sweep.hpp"
