#include "dsnn/run_config.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <string>

#include <json.hpp>

#include "dsnn/error.hpp"

namespace dsnn {

namespace {

using nlohmann::json;

void reject_unknown(const json& obj, const std::set<std::string>& allowed,
                    const std::string& prefix) {
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.contains(key)) throw ConfigError(prefix + key, "unknown key");
  }
}

template <typename T>
T get(const json& obj, const std::string& key, const std::string& prefix, T fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if constexpr (std::is_same_v<T, bool>) {
    if (!v.is_boolean()) throw ConfigError(prefix + key, "expected a boolean");
    return v.get<bool>();
  } else if constexpr (std::is_integral_v<T>) {
    if (!v.is_number_integer()) throw ConfigError(prefix + key, "expected an integer");
    if (v.is_number_unsigned()) return static_cast<T>(v.get<std::uint64_t>());
    const auto i = v.get<std::int64_t>();
    if (i < 0) throw ConfigError(prefix + key, "must be non-negative");
    return static_cast<T>(i);
  } else if constexpr (std::is_floating_point_v<T>) {
    if (!v.is_number()) throw ConfigError(prefix + key, "expected a number");
    return v.get<double>();
  } else {
    if (!v.is_string()) throw ConfigError(prefix + key, "expected a string");
    return v.get<std::string>();
  }
}

std::vector<std::size_t> get_index_list(const json& obj, const std::string& key) {
  std::vector<std::size_t> out;
  if (!obj.contains(key)) return out;
  const json& v = obj.at(key);
  if (!v.is_array()) throw ConfigError(key, "expected an integer array");
  for (const json& e : v) {
    if (!e.is_number_integer() || e.get<std::int64_t>() < 0) {
      throw ConfigError(key, "expected non-negative integers");
    }
    out.push_back(e.get<std::size_t>());
  }
  return out;
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  std::filesystem::path path(p);
  return path.is_absolute() || base.empty() ? path : base / path;
}

DatasetSpec parse_dataset(const json& obj, const std::filesystem::path& base) {
  if (!obj.is_object()) throw ConfigError("dataset", "expected an object");
  const std::string prefix = "dataset.";
  const auto type = get<std::string>(obj, "type", prefix, "");
  DatasetSpec spec;
  if (type == "mnist") {
    reject_unknown(obj, {"type", "images", "labels", "test_images", "test_labels", "train_limit",
                         "test_limit"},
                   prefix);
    spec.kind = DatasetSpec::Kind::kMnist;
    for (const char* key : {"images", "labels", "test_images", "test_labels"}) {
      if (!obj.contains(key)) throw ConfigError(prefix + key, "required for mnist datasets");
    }
    spec.images = resolve(base, get<std::string>(obj, "images", prefix, ""));
    spec.labels = resolve(base, get<std::string>(obj, "labels", prefix, ""));
    spec.test_images = resolve(base, get<std::string>(obj, "test_images", prefix, ""));
    spec.test_labels = resolve(base, get<std::string>(obj, "test_labels", prefix, ""));
    spec.train_limit = get<std::size_t>(obj, "train_limit", prefix, 0);
    spec.test_limit = get<std::size_t>(obj, "test_limit", prefix, 0);
  } else if (type == "synthetic") {
    reject_unknown(obj, {"type", "classes", "dim", "per_class", "separation", "seed"}, prefix);
    spec.kind = DatasetSpec::Kind::kSynthetic;
    spec.classes = get<std::size_t>(obj, "classes", prefix, spec.classes);
    spec.dim = get<std::size_t>(obj, "dim", prefix, spec.dim);
    spec.per_class = get<std::size_t>(obj, "per_class", prefix, spec.per_class);
    spec.separation = get<double>(obj, "separation", prefix, spec.separation);
    if (obj.contains("seed")) spec.seed = get<std::uint64_t>(obj, "seed", prefix, 0);
    if (spec.classes < 2) throw ConfigError("dataset.classes", "must be at least 2");
    if (spec.dim < spec.classes) throw ConfigError("dataset.dim", "must be >= classes");
    if (!(spec.separation > 0.0 && spec.separation <= 0.9)) {
      throw ConfigError("dataset.separation", "must lie in (0, 0.9]");
    }
  } else {
    throw ConfigError("dataset.type", "expected \"mnist\" or \"synthetic\"");
  }
  return spec;
}

}  // namespace

RunConfig parse_run_config(std::string_view json_text, const std::filesystem::path& base_dir) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError("<document>", std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("<document>", "top level must be an object");
  reject_unknown(doc,
                 {"seed", "arch", "time_steps", "tau", "v_th", "surrogate_width",
                  "initial_density", "p", "q", "alpha_r", "gamma", "beta", "scope",
                  "epoch_frequency", "regrow_fraction", "epochs", "batch_size", "lr",
                  "opt_momentum", "encoder", "dataset", "output_dir", "lr_schedule",
                  "exempt_layers", "log_pq_every_epoch"},
                 "");

  RunConfig cfg;
  TrainConfig& t = cfg.train;
  t.seed = get<std::uint64_t>(doc, "seed", "", t.seed);
  if (doc.contains("arch")) {
    const json& arch = doc.at("arch");
    if (!arch.is_array()) throw ConfigError("arch", "expected an integer array");
    t.layer_sizes.clear();
    for (const json& e : arch) {
      if (!e.is_number_integer() || e.get<std::int64_t>() <= 0) {
        throw ConfigError("arch", "layer sizes must be positive integers");
      }
      t.layer_sizes.push_back(e.get<std::size_t>());
    }
  }
  t.time_steps = get<std::size_t>(doc, "time_steps", "", t.time_steps);
  t.lif.tau = get<double>(doc, "tau", "", t.lif.tau);
  t.lif.v_th = get<double>(doc, "v_th", "", t.lif.v_th);
  t.lif.surrogate_width = get<double>(doc, "surrogate_width", "", t.lif.surrogate_width);
  t.initial_density = get<double>(doc, "initial_density", "", t.initial_density);
  t.pq.p = get<double>(doc, "p", "", t.pq.p);
  t.pq.q = get<double>(doc, "q", "", t.pq.q);
  t.pq.alpha_r = get<double>(doc, "alpha_r", "", t.pq.alpha_r);
  t.pq.gamma = get<double>(doc, "gamma", "", t.pq.gamma);
  t.pq.beta = get<double>(doc, "beta", "", t.pq.beta);

  const auto scope = get<std::string>(doc, "scope", "", "layer");
  if (scope == "layer") {
    t.scope = Scope::kLayer;
  } else if (scope == "neuron") {
    t.scope = Scope::kNeuron;
  } else {
    throw ConfigError("scope", "expected \"layer\" or \"neuron\"");
  }

  t.epoch_frequency = get<std::size_t>(doc, "epoch_frequency", "", t.epoch_frequency);
  t.regrow_fraction = get<double>(doc, "regrow_fraction", "", t.regrow_fraction);
  t.epochs = get<std::size_t>(doc, "epochs", "", t.epochs);
  t.batch_size = get<std::size_t>(doc, "batch_size", "", t.batch_size);
  t.lr = get<double>(doc, "lr", "", t.lr);
  t.opt_momentum = get<double>(doc, "opt_momentum", "", t.opt_momentum);

  const auto encoder = get<std::string>(doc, "encoder", "", "direct");
  if (encoder == "direct") {
    t.encoder = Encoding::kDirect;
  } else if (encoder == "rate") {
    t.encoder = Encoding::kRate;
  } else {
    throw ConfigError("encoder", "expected \"rate\" or \"direct\"");
  }

  const auto schedule = get<std::string>(doc, "lr_schedule", "", "constant");
  if (schedule == "constant") {
    t.lr_schedule = LrSchedule::kConstant;
  } else if (schedule == "cosine") {
    t.lr_schedule = LrSchedule::kCosine;
  } else {
    throw ConfigError("lr_schedule", "expected \"constant\" or \"cosine\"");
  }
  t.exempt_layers = get_index_list(doc, "exempt_layers");
  t.log_pq_every_epoch = get<bool>(doc, "log_pq_every_epoch", "", false);

  if (!doc.contains("dataset")) throw ConfigError("dataset", "required");
  cfg.dataset = parse_dataset(doc.at("dataset"), base_dir);
  if (!doc.contains("output_dir")) throw ConfigError("output_dir", "required");
  cfg.output_dir = resolve(base_dir, get<std::string>(doc, "output_dir", "", ""));

  t.validate();
  if (cfg.dataset.kind == DatasetSpec::Kind::kSynthetic) {
    if (cfg.dataset.dim != t.layer_sizes.front()) {
      throw ConfigError("arch", "input size must equal dataset.dim");
    }
    if (cfg.dataset.classes > t.layer_sizes.back()) {
      throw ConfigError("arch", "output size must cover dataset.classes");
    }
  }
  return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("<file>", "cannot read " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_run_config(buf.str(), path.parent_path());
}

std::pair<Dataset, Dataset> load_datasets(const DatasetSpec& spec, std::uint64_t run_seed) {
  if (spec.kind == DatasetSpec::Kind::kSynthetic) {
    Rng rng(spec.seed.value_or(run_seed));
    return synth_poisson(spec.classes, spec.dim, spec.per_class, spec.separation, rng);
  }
  Dataset train = idx_load(spec.images, spec.labels, Split::kTrain);
  Dataset test = idx_load(spec.test_images, spec.test_labels, Split::kTest, train.num_classes);
  train.num_classes = std::max(train.num_classes, test.num_classes);
  auto truncate = [](Dataset& ds, std::size_t limit) {
    if (limit == 0 || limit >= ds.size()) return;
    std::vector<double> head(ds.features.data().begin(),
                             ds.features.data().begin() +
                                 static_cast<std::ptrdiff_t>(limit * ds.dim()));
    ds.features = Tensor({limit, ds.dim()}, std::move(head));
    ds.labels.resize(limit);
  };
  truncate(train, spec.train_limit);
  truncate(test, spec.test_limit);
  return {std::move(train), std::move(test)};
}

}  // namespace dsnn
