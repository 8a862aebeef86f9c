#pragma once

#include "condexp/problem_file.hpp"

#include <json.hpp>

namespace condexp::detail {

using Json = nlohmann::ordered_json;

Json problem_to_json(const ProblemFile& problem);
ProblemFile problem_from_json(const Json& doc);

}  // namespace condexp::detail
