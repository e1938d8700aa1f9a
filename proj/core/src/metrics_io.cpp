#include "dsnn/metrics_io.hpp"

#include <array>
#include <charconv>

#include <json.hpp>

namespace dsnn {

std::string format_double(double v) {
  std::array<char, 32> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

std::string metrics_header(std::size_t num_layers) {
  std::string out = "epoch,train_loss,train_acc,test_acc";
  for (std::size_t l = 0; l < num_layers; ++l) out += ",density_l" + std::to_string(l);
  return out + ",sops,rewire_events";
}

std::string metrics_row(const EpochMetrics& m) {
  std::string out = std::to_string(m.epoch);
  out += "," + format_double(m.train_loss);
  out += "," + format_double(m.train_accuracy);
  out += "," + format_double(m.test_accuracy);
  for (double d : m.density) out += "," + format_double(d);
  out += "," + format_double(m.sops);
  out += "," + std::to_string(m.events.size());
  return out;
}

std::string event_json(const RewireEvent& event) {
  nlohmann::ordered_json j;
  j["epoch"] = event.epoch;
  j["layer"] = event.scope.layer;
  j["neuron"] = event.scope.neuron ? nlohmann::ordered_json(*event.scope.neuron) : nullptr;
  j["prune_count"] = event.prune_count;
  j["regrow_count"] = event.regrow_count;
  j["regrow_shortfall"] = event.regrow_shortfall;
  j["density_before"] = event.density_before;
  j["density_after"] = event.density_after;
  j["pruned_indices"] = event.pruned_indices;
  j["regrown_indices"] = event.regrown_indices;
  return j.dump();
}

std::string pq_header() { return "scope_id,d,index,r,prune_count,ratio"; }

std::string pq_row(const PqReport& report) {
  std::string out = report.scope.str() + "," + std::to_string(report.d);
  if (report.skip) return out + ",skip,skip,0,0";
  out += "," + format_double(report.index);
  out += "," + format_double(report.r);
  out += "," + std::to_string(report.prune_count);
  out += "," + format_double(report.ratio);
  return out;
}

}  // namespace dsnn
