#pragma once

// Umbrella header: continuous-time quantum walks, sedentary vertices and
// state transfer on weighted graphs.

#include "sedwalk/rational.hpp"
#include "sedwalk/graph.hpp"
#include "sedwalk/numtheory.hpp"
#include "sedwalk/spectral.hpp"
#include "sedwalk/walk.hpp"
#include "sedwalk/twins.hpp"
#include "sedwalk/sedentary.hpp"
#include "sedwalk/families.hpp"
#include "sedwalk/dsl.hpp"
