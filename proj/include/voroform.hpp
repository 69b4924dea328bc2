#pragma once

// Umbrella header: exact enumeration of perfect positive definite quadratic
// forms (classical and T-space restricted) with eutaxy/extremality
// classification and sphere-packing densities.

#include "voroform/errors.hpp"
#include "voroform/rational.hpp"
#include "voroform/matrix.hpp"
#include "voroform/quadform.hpp"
#include "voroform/shortvec.hpp"
#include "voroform/cone.hpp"
#include "voroform/neighbor.hpp"
#include "voroform/tspace.hpp"
#include "voroform/isometry.hpp"
#include "voroform/simplex.hpp"
#include "voroform/eutaxy.hpp"
#include "voroform/voronoi.hpp"
#include "voroform/io.hpp"
#include "voroform/serialize.hpp"
