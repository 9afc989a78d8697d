#pragma once

// Umbrella header for the ten application solvers.

#include "mm4mm/apps/dfrc.hpp"
#include "mm4mm/apps/eopt.hpp"
#include "mm4mm/apps/fair_pca.hpp"
#include "mm4mm/apps/instances.hpp"
#include "mm4mm/apps/iva.hpp"
#include "mm4mm/apps/placement.hpp"
#include "mm4mm/apps/poisson_pr.hpp"
#include "mm4mm/apps/qsd.hpp"
#include "mm4mm/apps/rkld.hpp"
#include "mm4mm/apps/rss.hpp"
#include "mm4mm/apps/tv.hpp"
