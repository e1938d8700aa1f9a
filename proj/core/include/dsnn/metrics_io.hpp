#pragma once

#include <cstddef>
#include <ostream>
#include <span>
#include <string>

#include "dsnn/rewire.hpp"
#include "dsnn/sparsity.hpp"
#include "dsnn/train.hpp"

namespace dsnn {

// Shortest decimal text that parses back to the same double.
std::string format_double(double v);

// epoch,train_loss,train_acc,test_acc,density_l0,...,sops,rewire_events
std::string metrics_header(std::size_t num_layers);
std::string metrics_row(const EpochMetrics& m);

// One JSON object, no trailing newline.
std::string event_json(const RewireEvent& event);

// scope_id,d,index,r,prune_count,ratio
std::string pq_header();
std::string pq_row(const PqReport& report);

}  // namespace dsnn
