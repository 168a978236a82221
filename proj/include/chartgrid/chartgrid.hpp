#pragma once

#include "chartgrid/dataset.hpp"
#include "chartgrid/evaluation.hpp"
#include "chartgrid/experiment.hpp"
#include "chartgrid/extraction/backend.hpp"
#include "chartgrid/extraction/cache.hpp"
#include "chartgrid/extraction/mock.hpp"
#include "chartgrid/extraction/parse.hpp"
#include "chartgrid/extraction/prompt.hpp"
#include "chartgrid/extraction/remote.hpp"
#include "chartgrid/gold_io.hpp"
#include "chartgrid/overlay.hpp"
#include "chartgrid/png.hpp"
#include "chartgrid/render.hpp"
#include "chartgrid/report.hpp"
#include "chartgrid/stats.hpp"
