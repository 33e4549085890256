#pragma once

#include "stvmd/config.hpp"
#include "stvmd/error.hpp"
#include "stvmd/fft.hpp"
#include "stvmd/metrics.hpp"
#include "stvmd/online.hpp"
#include "stvmd/signals.hpp"
#include "stvmd/spectral.hpp"
#include "stvmd/stvmd.hpp"
#include "stvmd/types.hpp"
#include "stvmd/vmd.hpp"
