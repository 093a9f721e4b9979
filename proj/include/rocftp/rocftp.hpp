#pragma once

// Everything at once: streams, engines, the example chains, the Strauss
// sampler, CIAFTP and the verification suites.

#include "rocftp/errors.hpp"
#include "rocftp/geometry.hpp"
#include "rocftp/stream.hpp"
#include "rocftp/core.hpp"
#include "rocftp/engines.hpp"
#include "rocftp/chains/exact.hpp"
#include "rocftp/chains/finite_map_chain.hpp"
#include "rocftp/chains/ising.hpp"
#include "rocftp/chains/lazy_walk.hpp"
#include "rocftp/chains/sort_chain.hpp"
#include "rocftp/ciaftp.hpp"
#include "rocftp/strauss/model.hpp"
#include "rocftp/strauss/render.hpp"
#include "rocftp/strauss/sampler.hpp"
#include "rocftp/verify/harness.hpp"
#include "rocftp/verify/oracles.hpp"
#include "rocftp/verify/stats.hpp"
#include "rocftp/verify/suites.hpp"
