#pragma once

#include "wavedrift/drift_analysis.hpp"
#include "wavedrift/dormand_prince.hpp"
#include "wavedrift/errors.hpp"
#include "wavedrift/phase_portrait.hpp"
#include "wavedrift/quadrature.hpp"
#include "wavedrift/roots.hpp"
#include "wavedrift/trajectory.hpp"
#include "wavedrift/wave_field.hpp"
