#pragma once

// JSON encodings of reports. Non-finite numbers become the strings "inf",
// "-inf" and "nan".

#include "json.hpp"

#include "sdlab/conditions.hpp"
#include "sdlab/domination.hpp"
#include "sdlab/moments.hpp"
#include "sdlab/simulate.hpp"

namespace sdlab {

using json = nlohmann::json;

json number(double v);
json to_json(const DominationReport& r);
json to_json(const ConditionVerdict& v);
json to_json(const UiReport& r);
json to_json(const MomentSup& m);
json to_json(const SimReport& r);
json to_json(const TruncatedBounds& b);

}  // namespace sdlab
