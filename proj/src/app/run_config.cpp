// Copyright 2026 The Quadloco Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "quadloco/app/run_config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "quadloco/error.hpp"

namespace quadloco::app {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

[[noreturn]] void bad_value(std::string_view key, std::string_view value,
                            std::string_view expected) {
  throw ConfigError("config key '" + std::string(key) + "': cannot parse '" +
                    std::string(value) + "' as " + std::string(expected));
}

template <class T>
T parse_number(std::string_view key, std::string_view text) {
  text = trim(text);
  T v{};
  const char* first = text.data();
  const char* last = text.data() + text.size();
  if (!text.empty() && text.front() == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || text.empty()) {
    bad_value(key, text, std::is_floating_point_v<T> ? "a number" : "an integer");
  }
  if constexpr (std::is_floating_point_v<T>) {
    if (std::isnan(v)) bad_value(key, text, "a number");
  }
  return v;
}

bool parse_bool(std::string_view key, std::string_view text) {
  text = trim(text);
  if (text == "true" || text == "1" || text == "yes" || text == "on") return true;
  if (text == "false" || text == "0" || text == "no" || text == "off") return false;
  bad_value(key, text, "a boolean");
}

template <class T>
std::vector<T> parse_list(std::string_view key, std::string_view text) {
  std::vector<T> out;
  text = trim(text);
  if (text.empty()) return out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = text.find(',', start);
    out.push_back(parse_number<T>(key, text.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

template <class T>
std::string format_value(const T& v) {
  if constexpr (std::is_same_v<T, bool>) {
    return v ? "true" : "false";
  } else if constexpr (std::is_same_v<T, std::string>) {
    return v;
  } else if constexpr (std::is_floating_point_v<T>) {
    return format_double(v);
  } else if constexpr (std::is_integral_v<T>) {
    return std::to_string(v);
  } else {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (i > 0) out += ',';
      out += format_value(v[i]);
    }
    return out;
  }
}

struct Entry {
  std::string name;
  std::string doc;
  std::function<void(RunConfig&, std::string_view)> set;
  std::function<std::string(const RunConfig&)> get;
};

template <class T>
Entry field(const char* name, T RunConfig::*member, const char* doc) {
  Entry e{name, doc, {}, {}};
  const std::string key = name;
  e.set = [member, key](RunConfig& c, std::string_view text) {
    if constexpr (std::is_same_v<T, bool>) {
      c.*member = parse_bool(key, text);
    } else if constexpr (std::is_same_v<T, std::string>) {
      c.*member = std::string(trim(text));
    } else if constexpr (std::is_arithmetic_v<T>) {
      c.*member = parse_number<T>(key, text);
    } else {
      c.*member = parse_list<typename T::value_type>(key, text);
    }
  };
  e.get = [member](const RunConfig& c) { return format_value(c.*member); };
  return e;
}

const std::vector<Entry>& entries() {
  static const std::vector<Entry> table = [] {
    std::vector<Entry> t;
    t.push_back(field("run_id", &RunConfig::run_id, "run directory name under out_dir"));
    t.push_back(field("out_dir", &RunConfig::out_dir, "output root"));
    t.push_back(field("seed", &RunConfig::seed, "master seed"));
    Entry epochs{"epochs", "training epochs (required for train and symmetry-report)", {}, {}};
    epochs.set = [](RunConfig& c, std::string_view text) {
      c.epochs = parse_number<int>("epochs", text);
    };
    epochs.get = [](const RunConfig& c) {
      return c.epochs ? std::to_string(*c.epochs) : std::string();
    };
    t.push_back(epochs);
    t.push_back(field("num_envs", &RunConfig::num_envs, "parallel environments"));
    t.push_back(field("batch_size", &RunConfig::batch_size,
                      "samples per epoch, a multiple of num_envs"));
    t.push_back(field("threads", &RunConfig::threads, "rollout worker threads"));
    t.push_back(field("group_size", &RunConfig::group_size,
                      "environments per batched network evaluation"));
    t.push_back(field("resume", &RunConfig::resume, "continue from the newest checkpoint"));
    t.push_back(field("checkpoint_every", &RunConfig::checkpoint_every,
                      "epochs between checkpoints; the last epoch is always saved"));
    t.push_back(field("eval_every", &RunConfig::eval_every,
                      "epochs between eval.csv rows, 0 disables"));
    t.push_back(field("eval_episodes", &RunConfig::eval_episodes,
                      "deterministic episodes per eval.csv row"));
    t.push_back(field("hidden_layers", &RunConfig::hidden_layers,
                      "hidden widths of the policy and value networks"));
    t.push_back(field("init_log_std", &RunConfig::init_log_std,
                      "initial log standard deviation of the action noise"));
    t.push_back(field("gamma", &RunConfig::gamma, "discount"));
    t.push_back(field("gae_lambda", &RunConfig::gae_lambda, "GAE lambda"));
    t.push_back(field("clip_epsilon", &RunConfig::clip_epsilon, "PPO clip range"));
    t.push_back(field("kl_threshold", &RunConfig::kl_threshold, "approximate KL limit"));
    t.push_back(field("kl_mode", &RunConfig::kl_mode, "early_stop or adaptive_lr"));
    t.push_back(field("lr_init", &RunConfig::lr_init, "initial learning rate"));
    t.push_back(field("lr_min", &RunConfig::lr_min, "learning rate floor"));
    t.push_back(field("lr_decay_epochs", &RunConfig::lr_decay_epochs,
                      "epochs of linear learning-rate decay"));
    t.push_back(field("update_epochs", &RunConfig::update_epochs, "passes over each batch"));
    t.push_back(field("minibatches", &RunConfig::minibatches, "minibatches per pass"));
    t.push_back(field("value_coef", &RunConfig::value_coef, "value loss weight"));
    t.push_back(field("entropy_coef", &RunConfig::entropy_coef, "entropy bonus weight"));
    t.push_back(field("max_grad_norm", &RunConfig::max_grad_norm,
                      "gradient norm clip per network, 0 disables"));
    t.push_back(field("normalize_advantages", &RunConfig::normalize_advantages,
                      "standardize advantages per batch"));
    t.push_back(field("reward_floor", &RunConfig::reward_floor,
                      "per-step rewards are raised to this value before GAE; -inf disables"));
    t.push_back(field("episode_length", &RunConfig::episode_length, "episode limit in s"));
    t.push_back(field("spawn_height", &RunConfig::spawn_height, "base spawn height in m"));
    t.push_back(field("spawn_radius", &RunConfig::spawn_radius,
                      "random spawn offset in m"));
    t.push_back(field("obs_noise", &RunConfig::obs_noise,
                      "standard deviation of additive observation noise"));
    t.push_back(field("vx_max", &RunConfig::vx_max, "command range |v_cx| in m/s"));
    t.push_back(field("vy_max", &RunConfig::vy_max, "command range |v_cy| in m/s"));
    t.push_back(field("wz_max", &RunConfig::wz_max, "command range |w_cz| in rad/s"));
    t.push_back(field("kp", &RunConfig::kp, "joint stiffness in N m/rad"));
    t.push_back(field("kd", &RunConfig::kd, "joint damping in N m s/rad"));
    t.push_back(field("tau_max", &RunConfig::tau_max, "torque limit in N m"));
    t.push_back(field("friction", &RunConfig::friction, "foot friction coefficient"));
    t.push_back(field("w_lv", &RunConfig::w_lv, "linear velocity tracking weight"));
    t.push_back(field("w_az", &RunConfig::w_az, "yaw rate tracking weight"));
    t.push_back(field("w_lvp", &RunConfig::w_lvp, "vertical velocity penalty weight"));
    t.push_back(field("w_azp", &RunConfig::w_azp, "roll/pitch rate penalty weight"));
    t.push_back(field("w_g", &RunConfig::w_g, "attitude penalty weight"));
    t.push_back(field("w_tau", &RunConfig::w_tau, "torque penalty weight"));
    t.push_back(field("w_collide", &RunConfig::w_collide, "knee collision penalty weight"));
    t.push_back(field("w_ar", &RunConfig::w_ar, "action rate penalty weight"));
    t.push_back(field("curriculum", &RunConfig::curriculum, "enable the terrain curriculum"));
    t.push_back(field("curriculum_alpha", &RunConfig::curriculum_alpha,
                      "reward moving-average rate"));
    t.push_back(field("curriculum_threshold", &RunConfig::curriculum_threshold,
                      "moving-average reward that counts as stable"));
    t.push_back(field("curriculum_patience", &RunConfig::curriculum_patience,
                      "consecutive stable epochs before advancing"));
    t.push_back(field("initial_terrain", &RunConfig::initial_terrain,
                      "0 flat, 1 slopes, 2 steps"));
    t.push_back(field("terrain_seed", &RunConfig::terrain_seed, "terrain generator seed"));
    t.push_back(field("randomization", &RunConfig::randomization,
                      "enable domain randomization"));
    t.push_back(field("friction_range", &RunConfig::friction_range,
                      "friction scale lo,hi"));
    t.push_back(field("mass_range", &RunConfig::mass_range, "mass scale lo,hi"));
    t.push_back(field("kp_range", &RunConfig::kp_range, "kp scale lo,hi"));
    t.push_back(field("kd_range", &RunConfig::kd_range, "kd scale lo,hi"));
    t.push_back(field("push_max", &RunConfig::push_max, "random push speed limit in m/s"));
    t.push_back(field("push_interval", &RunConfig::push_interval, "s between random pushes"));
    t.push_back(field("tracking_cap", &RunConfig::tracking_cap,
                      "final command of the linear staircase in m/s"));
    t.push_back(field("tracking_settle", &RunConfig::tracking_settle,
                      "standing time before each protocol, not in the protocol CSVs, in s"));
    t.push_back(field("hold_time", &RunConfig::hold_time,
                      "length of the zero-command hold in s"));
    t.push_back(field("angular_rates", &RunConfig::angular_rates,
                      "yaw rate command of each angular group in rad/s"));
    t.push_back(field("angular_timeout", &RunConfig::angular_timeout,
                      "time limit per angular group in s"));
    t.push_back(field("trajectory_dump", &RunConfig::trajectory_dump,
                      "eval-tracking also writes simulator trajectories, one row per control step"));
    t.push_back(field("impact_tests", &RunConfig::impact_tests,
                      "trials per impact-test iteration, even"));
    t.push_back(field("impact_push_interval", &RunConfig::impact_push_interval,
                      "settle and watch time around each push in s"));
    t.push_back(field("impact_vmax", &RunConfig::impact_vmax, "initial push limit in m/s"));
    t.push_back(field("impact_iterations", &RunConfig::impact_iterations,
                      "iteration cap before the test is inconclusive"));
    t.push_back(field("hysteresis_delta", &RunConfig::hysteresis_delta,
                      "selector dead band half-width in rad"));
    t.push_back(field("symmetry_seeds", &RunConfig::symmetry_seeds,
                      "seeds of the symmetry report"));
    return t;
  }();
  return table;
}

const Entry& find_entry(std::string_view key) {
  for (const Entry& e : entries()) {
    if (e.name == key) return e;
  }
  throw ConfigError("unknown config key '" + std::string(key) + "'");
}

void check(bool ok, const std::string& message) {
  if (!ok) throw ConfigError("config: " + message);
}

env::ScaleRange to_range(const std::vector<double>& v, const char* key) {
  check(v.size() == 2, std::string(key) + " needs exactly two values");
  return {v[0], v[1]};
}

}  // namespace

const std::vector<ConfigKeyInfo>& config_keys() {
  static const std::vector<ConfigKeyInfo> keys = [] {
    std::vector<ConfigKeyInfo> out;
    const RunConfig defaults;
    for (const Entry& e : entries()) out.push_back({e.name, e.get(defaults), e.doc});
    return out;
  }();
  return keys;
}

void set_config_value(RunConfig& config, std::string_view key, std::string_view value) {
  find_entry(trim(key)).set(config, value);
}

std::string get_config_value(const RunConfig& config, std::string_view key) {
  return find_entry(key).get(config);
}

RunConfig parse_run_config(std::string_view text, std::string_view origin) {
  RunConfig config;
  std::set<std::string> seen;
  std::istringstream in{std::string(text)};
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const std::string_view l = trim(line);
    if (l.empty() || l.front() == '#') continue;
    const auto eq = l.find('=');
    const std::string where = std::string(origin) + ":" + std::to_string(number);
    if (eq == std::string_view::npos) {
      throw ConfigError(where + ": expected key=value");
    }
    const std::string key(trim(l.substr(0, eq)));
    if (!seen.insert(key).second) {
      throw ConfigError(where + ": duplicate key '" + key + "'");
    }
    try {
      set_config_value(config, key, l.substr(eq + 1));
    } catch (const ConfigError& e) {
      throw ConfigError(where + ": " + e.what());
    }
  }
  return config;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_run_config(text.str(), path);
}

std::string env_override_name(std::string_view key) {
  std::string name = "QUADLOCO_";
  for (char c : key) name += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return name;
}

void apply_env_overrides(RunConfig& config, const EnvLookup& lookup) {
  for (const Entry& e : entries()) {
    const std::string var = env_override_name(e.name);
    std::optional<std::string> value;
    if (lookup) {
      value = lookup(var);
    } else if (const char* raw = std::getenv(var.c_str())) {
      value = raw;
    }
    if (!value) continue;
    try {
      e.set(config, *value);
    } catch (const ConfigError& err) {
      throw ConfigError(var + ": " + err.what());
    }
  }
}

std::string RunConfig::to_text() const {
  std::string out;
  for (const Entry& e : entries()) {
    const std::string value = e.get(*this);
    if (e.name == "epochs" && value.empty()) {
      out += "# epochs is not set\n";
      continue;
    }
    out += e.name + "=" + value + "\n";
  }
  return out;
}

std::string RunConfig::run_dir() const {
  return (std::filesystem::path(out_dir) / run_id).string();
}

void RunConfig::validate() const {
  check(!run_id.empty() && run_id.find_first_of("/\\") == std::string::npos &&
            run_id != "." && run_id != "..",
        "run_id must be a plain directory name");
  check(!out_dir.empty(), "out_dir must not be empty");
  if (epochs) check(*epochs > 0, "epochs must be > 0");
  check(num_envs > 0, "num_envs must be > 0");
  check(batch_size > 0 && batch_size % num_envs == 0,
        "batch_size must be a positive multiple of num_envs");
  check(threads >= 1, "threads must be >= 1");
  check(group_size >= 1, "group_size must be >= 1");
  check(checkpoint_every >= 1, "checkpoint_every must be >= 1");
  check(eval_every >= 0 && eval_episodes >= 1, "eval_every >= 0 and eval_episodes >= 1");
  check(!hidden_layers.empty(), "hidden_layers must not be empty");
  for (int w : hidden_layers) check(w > 0, "hidden_layers entries must be > 0");
  check(std::isfinite(init_log_std), "init_log_std must be finite");
  check(kl_mode == "early_stop" || kl_mode == "adaptive_lr",
        "kl_mode must be early_stop or adaptive_lr");
  check(lr_decay_epochs > 0, "lr_decay_epochs must be > 0");
  check(initial_terrain >= 0 && initial_terrain <= env::kLastTerrainIndex,
        "initial_terrain must be 0, 1 or 2");
  check(tracking_cap >= 1.0, "tracking_cap must be >= 1");
  check(tracking_settle >= 0.0 && hold_time > 0.0, "tracking_settle >= 0 and hold_time > 0");
  check(!angular_rates.empty(), "angular_rates must not be empty");
  for (double w : angular_rates) check(w != 0.0, "angular_rates entries must be nonzero");
  check(angular_timeout > 0.0, "angular_timeout must be > 0");
  check(impact_tests >= 2 && impact_tests % 2 == 0, "impact_tests must be even and >= 2");
  check(impact_push_interval > 0.0 && impact_vmax > 0.0 && impact_iterations >= 1,
        "impact test parameters must be positive");
  check(hysteresis_delta >= 0.0, "hysteresis_delta must be >= 0");
  std::set<std::uint64_t> unique(symmetry_seeds.begin(), symmetry_seeds.end());
  check(unique.size() == symmetry_seeds.size(), "symmetry_seeds must be distinct");
  train_options().validate();
}

void RunConfig::validate_for_training() const {
  check(epochs.has_value(), "missing required key 'epochs'");
  validate();
}

env::EnvConfig RunConfig::env_config() const {
  env::EnvConfig c;
  c.model.kp = kp;
  c.model.kd = kd;
  c.model.tau_max = tau_max;
  c.model.friction = friction;
  c.max_episode_time = episode_length;
  c.spawn_height = spawn_height;
  c.spawn_radius = spawn_radius;
  c.obs_noise_std = obs_noise;
  c.commands = {vx_max, vy_max, wz_max};
  c.weights = {w_lv, w_az, w_lvp, w_azp, w_g, w_tau, w_collide, w_ar};
  c.randomization.enabled = randomization;
  c.randomization.friction = to_range(friction_range, "friction_range");
  c.randomization.mass = to_range(mass_range, "mass_range");
  c.randomization.kp = to_range(kp_range, "kp_range");
  c.randomization.kd = to_range(kd_range, "kd_range");
  c.randomization.push_max = push_max;
  c.randomization.push_interval = push_interval;
  return c;
}

ppo::TrainOptions RunConfig::train_options() const {
  ppo::TrainOptions o;
  o.env = env_config();
  o.terrain_seed = terrain_seed;
  o.ppo.gamma = gamma;
  o.ppo.gae_lambda = gae_lambda;
  o.ppo.clip_epsilon = clip_epsilon;
  o.ppo.kl_threshold = kl_threshold;
  o.ppo.kl_mode = kl_mode == "adaptive_lr" ? ppo::KlMode::kAdaptiveLr : ppo::KlMode::kEarlyStop;
  o.ppo.lr_init = lr_init;
  o.ppo.lr_min = lr_min;
  o.ppo.total_epochs = lr_decay_epochs;
  o.ppo.update_epochs = update_epochs;
  o.ppo.minibatches = minibatches;
  o.ppo.value_coef = value_coef;
  o.ppo.entropy_coef = entropy_coef;
  o.ppo.max_grad_norm = max_grad_norm;
  o.ppo.normalize_advantages = normalize_advantages;
  o.ppo.reward_floor = reward_floor;
  o.curriculum.enabled = curriculum;
  o.curriculum.alpha = curriculum_alpha;
  o.curriculum.threshold = curriculum_threshold;
  o.curriculum.patience = curriculum_patience;
  o.initial_terrain = initial_terrain;
  o.epochs = epochs.value_or(1);
  o.num_envs = num_envs;
  o.steps_per_env = num_envs > 0 ? batch_size / num_envs : 0;
  o.group_size = group_size;
  o.threads = threads;
  o.hidden_layers = hidden_layers;
  o.init_log_std = init_log_std;
  o.seed = seed;
  o.run_dir = run_dir();
  o.checkpoint_every = checkpoint_every;
  o.eval_every = eval_every;
  o.eval_episodes = eval_episodes;
  o.resume = resume;
  nlohmann::json echo = nlohmann::json::object();
  for (const Entry& e : entries()) echo[e.name] = e.get(*this);
  o.config_echo = std::move(echo);
  return o;
}

mirror::ImpactTestConfig RunConfig::impact_config() const {
  mirror::ImpactTestConfig c;
  c.total_tests = impact_tests;
  c.push_interval = impact_push_interval;
  c.initial_vmax = impact_vmax;
  c.max_iterations = impact_iterations;
  c.seed = seed;
  return c;
}

}  // namespace quadloco::app
