#pragma once

// Umbrella header for the visual-path localization library.

#include "vpr/bootstrap.hpp"
#include "vpr/config.hpp"
#include "vpr/convolve.hpp"
#include "vpr/descriptor.hpp"
#include "vpr/dsift.hpp"
#include "vpr/encode.hpp"
#include "vpr/errors.hpp"
#include "vpr/extract.hpp"
#include "vpr/hash.hpp"
#include "vpr/image_io.hpp"
#include "vpr/journey.hpp"
#include "vpr/kernels.hpp"
#include "vpr/kmeans.hpp"
#include "vpr/lw_color.hpp"
#include "vpr/manifest.hpp"
#include "vpr/metrics.hpp"
#include "vpr/parallel.hpp"
#include "vpr/pipeline.hpp"
#include "vpr/plane.hpp"
#include "vpr/pooling.hpp"
#include "vpr/protocol.hpp"
#include "vpr/report.hpp"
#include "vpr/rng.hpp"
#include "vpr/score.hpp"
#include "vpr/sf_gabor.hpp"
#include "vpr/st_gabor.hpp"
#include "vpr/st_gauss.hpp"
#include "vpr/synth.hpp"
#include "vpr/temporal.hpp"
#include "vpr/text.hpp"
