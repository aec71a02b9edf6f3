// Copyright The eigrom Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef EIGROM_VERSION_HPP
#define EIGROM_VERSION_HPP

namespace eigrom
{

inline constexpr const char *kVersion = "1.0.0";

}  // namespace eigrom

#endif  // EIGROM_VERSION_HPP
