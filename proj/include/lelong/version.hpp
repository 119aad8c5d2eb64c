// Copyright (c) 2026 The lelong authors.
// Licensed under the Apache License, Version 2.0; see LICENSE for details.
#pragma once

namespace lelong {
inline constexpr const char* kVersion = "0.1.0";
}
