#pragma once

#include "dilatation/core/config.hpp"
#include "dilatation/core/errors.hpp"
#include "dilatation/core/format.hpp"
#include "dilatation/core/harness.hpp"
#include "dilatation/core/operators.hpp"
#include "dilatation/core/parallel.hpp"
#include "dilatation/core/report.hpp"
#include "dilatation/core/scale.hpp"
#include "dilatation/core/structure.hpp"

#include "dilatation/models/carnot.hpp"
#include "dilatation/models/complex_heisenberg.hpp"
#include "dilatation/models/conical.hpp"
#include "dilatation/models/dyadic.hpp"
#include "dilatation/models/dyadic_integer.hpp"
#include "dilatation/models/dyadic_w.hpp"
#include "dilatation/models/euclidean.hpp"
#include "dilatation/models/heisenberg.hpp"
#include "dilatation/models/pullback.hpp"

#include "dilatation/emergent/affine_map.hpp"
#include "dilatation/emergent/induced.hpp"
#include "dilatation/emergent/linearity.hpp"
#include "dilatation/emergent/pansu.hpp"
#include "dilatation/emergent/tangent.hpp"

#include "dilatation/affine/barycentric.hpp"
#include "dilatation/affine/collinear.hpp"
#include "dilatation/affine/counterexample.hpp"
#include "dilatation/affine/distance_estimates.hpp"
#include "dilatation/affine/menelaos.hpp"
#include "dilatation/affine/probes.hpp"
#include "dilatation/affine/ratio.hpp"
