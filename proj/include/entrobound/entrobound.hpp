// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "entrobound/entropy.hpp"
#include "entrobound/errors.hpp"
#include "entrobound/measure.hpp"
#include "entrobound/numeric.hpp"
#include "entrobound/parallel.hpp"
#include "entrobound/report.hpp"
#include "entrobound/tilt.hpp"
#include "entrobound/verify.hpp"
