#pragma once

// Umbrella header.

#include "roced/config.hpp"
#include "roced/dataset.hpp"
#include "roced/enn.hpp"
#include "roced/error.hpp"
#include "roced/evaluation.hpp"
#include "roced/experiment.hpp"
#include "roced/folds.hpp"
#include "roced/hardness.hpp"
#include "roced/keel.hpp"
#include "roced/meta.hpp"
#include "roced/neighborhood.hpp"
#include "roced/pool.hpp"
#include "roced/report.hpp"
#include "roced/selection.hpp"
#include "roced/wilcoxon.hpp"
