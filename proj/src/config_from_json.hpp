#pragma once

// Internal: JSON-object parsers shared by the path-based loaders and the
// scenario runner, which embeds the same objects inline.

#include "swingsim/backstop.hpp"
#include "swingsim/firefly.hpp"
#include "swingsim/json_util.hpp"
#include "swingsim/smoothing.hpp"
#include "swingsim/storage.hpp"
#include "swingsim/trace.hpp"
#include "swingsim/utility_spec.hpp"

namespace swingsim::detail {

DeviceModel device_from_json(const jsonu::json& j);
WorkloadModel workload_from_json(const jsonu::json& j);
UtilitySpec utility_spec_from_json(const jsonu::json& j);
SmoothingProfile smoothing_profile_from_json(const jsonu::json& j);
FireflyConfig firefly_config_from_json(const jsonu::json& j);
StorageConfig storage_config_from_json(const jsonu::json& j);
BackstopConfig backstop_config_from_json(const jsonu::json& j);

}  // namespace swingsim::detail
