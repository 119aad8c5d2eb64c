// Copyright (c) 2026 The lelong authors.
// Licensed under the Apache License, Version 2.0; see LICENSE for details.
#pragma once

#include <json.hpp>

#include "lelong/bergman.hpp"
#include "lelong/geometry.hpp"
#include "lelong/kiselman.hpp"
#include "lelong/montecarlo.hpp"
#include "lelong/toric.hpp"
#include "lelong/weights.hpp"

namespace lelong {

nlohmann::json describe(const mc::ThresholdEstimate& e);
nlohmann::json describe(const mc::AnnulusProfile& p);
nlohmann::json describe(const AdmissibilityReport& r);
nlohmann::json describe(const SkodaReport& r);
nlohmann::json describe(const ExactValue& v);
nlohmann::json describe(const geom::GrassmannCheck& g);
nlohmann::json describe(const geom::LineRestrictionEstimate& l);
nlohmann::json describe(const kis::DirectionalEstimate& d);
nlohmann::json describe(const kis::RescaleReport& r);
nlohmann::json describe(const kis::DirectionalIntegralReport& r);
nlohmann::json describe(const bergman::BergmanModel& m);
nlohmann::json describe(const mc::PropertySuiteReport& r);
nlohmann::json describe(const mc::BiholoReport& r);

}  // namespace lelong
