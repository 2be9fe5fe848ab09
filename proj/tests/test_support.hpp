// Shared helpers for the test binaries.
#pragma once

#include <memory>

#include "copsrobber/metric_graph.hpp"
#include "copsrobber/selftest.hpp"

namespace testing_support {

using namespace copsrobber;

inline GraphPtr share(MetricGraph g) { return std::make_shared<const MetricGraph>(std::move(g)); }

using copsrobber::random_cop_path;
using copsrobber::random_oracle_instance;
using copsrobber::random_point;

}  // namespace testing_support
