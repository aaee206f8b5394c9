#pragma once

#include "bimmdf/core.hpp"
#include "bimmdf/distribution.hpp"
#include "bimmdf/model.hpp"
#include "bimmdf/random.hpp"
#include "bimmdf/sampler.hpp"
#include "bimmdf/spectral.hpp"
#include "bimmdf/spa.hpp"
#include "bimmdf/disp.hpp"
#include "bimmdf/metrics.hpp"
#include "bimmdf/io.hpp"
#include "bimmdf/harness.hpp"
#include "bimmdf/ingest.hpp"
