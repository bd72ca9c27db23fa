#pragma once

#include "kropina/algebra.hpp"
#include "kropina/compare.hpp"
#include "kropina/curvature.hpp"
#include "kropina/errors.hpp"
#include "kropina/finsler.hpp"
#include "kropina/metric.hpp"
#include "kropina/model_io.hpp"
#include "kropina/models.hpp"
#include "kropina/report.hpp"
#include "kropina/scan.hpp"
