#pragma once

#include "isstealth/aoa.hpp"
#include "isstealth/config.hpp"
#include "isstealth/errors.hpp"
#include "isstealth/harness.hpp"
#include "isstealth/nu_solver.hpp"
#include "isstealth/phase_recovery.hpp"
#include "isstealth/scenario.hpp"
#include "isstealth/sensing.hpp"
