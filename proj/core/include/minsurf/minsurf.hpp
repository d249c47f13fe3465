#pragma once

#include "minsurf/assembly.hpp"
#include "minsurf/config.hpp"
#include "minsurf/errors.hpp"
#include "minsurf/export.hpp"
#include "minsurf/geometry.hpp"
#include "minsurf/mesh.hpp"
#include "minsurf/refine.hpp"
#include "minsurf/relax.hpp"
