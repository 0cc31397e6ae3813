#pragma once

// Geometry and channel
#include "md2d/topology.hpp"
#include "md2d/antenna.hpp"
#include "md2d/channel.hpp"

// Scheduling
#include "md2d/partition.hpp"
#include "md2d/schedule.hpp"
#include "md2d/baselines.hpp"
#include "md2d/oracle.hpp"
#include "md2d/metrics.hpp"

// Experiments
#include "md2d/config.hpp"
#include "md2d/harness.hpp"
#include "md2d/trace.hpp"
