#pragma once

#include "framekin/chart_map.hpp"
#include "framekin/dual.hpp"
#include "framekin/equivalence.hpp"
#include "framekin/errors.hpp"
#include "framekin/frames.hpp"
#include "framekin/friedmann.hpp"
#include "framekin/geodesic.hpp"
#include "framekin/geometry.hpp"
#include "framekin/normal_frames.hpp"
#include "framekin/point_function.hpp"
#include "framekin/quadrature.hpp"
#include "framekin/tensor.hpp"
