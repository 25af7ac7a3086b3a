#ifndef ADINSP_ADINSP_HPP_
#define ADINSP_ADINSP_HPP_

#include "adinsp/geometry/camera.hpp"
#include "adinsp/geometry/frechet.hpp"
#include "adinsp/geometry/io.hpp"
#include "adinsp/geometry/kabsch.hpp"
#include "adinsp/geometry/nearest.hpp"
#include "adinsp/geometry/normals.hpp"
#include "adinsp/geometry/polygon.hpp"
#include "adinsp/geometry/types.hpp"

#include "adinsp/env/collision.hpp"
#include "adinsp/env/scene.hpp"
#include "adinsp/env/sensors.hpp"
#include "adinsp/env/voxel_map.hpp"

#include "adinsp/global/route.hpp"
#include "adinsp/global/tsp.hpp"
#include "adinsp/global/viewpoints.hpp"

#include "adinsp/local/view_planner.hpp"

#include "adinsp/mission/controller.hpp"
#include "adinsp/mission/metrics.hpp"
#include "adinsp/mission/supervisor.hpp"

#include "adinsp/app/artifacts.hpp"
#include "adinsp/app/runner.hpp"
#include "adinsp/app/scenario.hpp"

#endif  // ADINSP_ADINSP_HPP_
