#pragma once

#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "heis/experiments.hpp"
#include "heis/group.hpp"

namespace heis {

// %.17g; nan/inf spelled as such.
std::string csv_number(double v);

// Long format: quantity,index,value,std_error
void write_boundedness_csv(std::ostream& os, const BoundednessReport& rep);
void write_endpoint_csv(std::ostream& os, const EndpointReport& rep);

// One row per truncation step.
void write_divergence_csv(std::ostream& os, const DivergenceReport& rep);

// Single row.
void write_tiling_csv(std::ostream& os, const TilingReport& rep);

struct PointEvaluation {
    std::string op;
    GroupPoint at;
    EstimateWithError estimate;
};
void write_point_csv(std::ostream& os, const PointEvaluation& ev);

// Sidecar metadata in the same INI dialect as configs. Only this file
// carries a timestamp.
struct Metadata {
    std::string command;
    std::string config_text;
    std::vector<std::pair<std::string, std::string>> results;
};
std::string metadata_text(const Metadata& meta, bool with_timestamp = true);

}  // namespace heis
