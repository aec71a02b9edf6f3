// Copyright The eigrom Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef EIGROM_EIGROM_HPP
#define EIGROM_EIGROM_HPP

#include "eigrom/config.hpp"
#include "eigrom/diagnostics.hpp"
#include "eigrom/eigensolve.hpp"
#include "eigrom/error.hpp"
#include "eigrom/experiments.hpp"
#include "eigrom/fem.hpp"
#include "eigrom/io.hpp"
#include "eigrom/mesh.hpp"
#include "eigrom/pod.hpp"
#include "eigrom/presets.hpp"
#include "eigrom/rom.hpp"
#include "eigrom/sampling.hpp"
#include "eigrom/version.hpp"

#endif  // EIGROM_EIGROM_HPP
