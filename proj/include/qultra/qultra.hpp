#pragma once

#include "qultra/errors.hpp"
#include "qultra/qcore.hpp"
#include "qultra/hyperseries.hpp"
#include "qultra/ultraspherical.hpp"
#include "qultra/awoperator.hpp"
#include "qultra/quadrature.hpp"
#include "qultra/verification.hpp"
