// json_io.hpp: internal JSON conversions shared by config, report and witness code

#pragma once

#include "ncmart/config.hpp"
#include "ncmart/report.hpp"

#include <json.hpp>

namespace ncm::detail {

using json = nlohmann::json;

json descriptor_json(const FiltrationDescriptor& d);
FiltrationDescriptor descriptor_from_json(const json& j);
json config_json(const ExperimentConfig& c);
json witness_json(const Witness& w);

// Infinite or NaN values become null.
json number(double v);
double number_from(const json& j);

} // namespace ncm::detail
