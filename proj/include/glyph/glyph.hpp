// Copyright 2026 The glyphforge Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include "glyph/atlas.hpp"
#include "glyph/augment.hpp"
#include "glyph/codebook.hpp"
#include "glyph/common.hpp"
#include "glyph/contrastive.hpp"
#include "glyph/dataset.hpp"
#include "glyph/decode.hpp"
#include "glyph/document.hpp"
#include "glyph/encoders.hpp"
#include "glyph/layout.hpp"
#include "glyph/linalg.hpp"
#include "glyph/metrics.hpp"
#include "glyph/prompt.hpp"
#include "glyph/raster.hpp"
#include "glyph/region_attn.hpp"
#include "glyph/roi_align.hpp"
#include "glyph/sdedit.hpp"
#include "glyph/train.hpp"
