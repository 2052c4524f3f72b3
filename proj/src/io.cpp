#include "floodgate/io.hpp"

#include "floodgate/errors.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <set>
#include <sstream>

namespace floodgate {

using nlohmann::json;

std::string_view
to_string(Protocol p) noexcept
{
  return p == Protocol::Udp ? "UDP" : "TCP";
}

Protocol
parse_protocol(std::string_view text)
{
  if (text == "UDP") {
    return Protocol::Udp;
  }
  if (text == "TCP") {
    return Protocol::Tcp;
  }
  throw InputError("unknown protocol '" + std::string(text) + "'");
}

std::string_view
to_string(EventKind k) noexcept
{
  switch (k) {
  case EventKind::Arrival:
    return "arrival";
  case EventKind::ServiceStart:
    return "service_start";
  case EventKind::Departure:
    return "departure";
  case EventKind::Drop:
    return "drop";
  }
  return "?";
}

EventKind
parse_event_kind(std::string_view text)
{
  for (auto k : {EventKind::Arrival, EventKind::ServiceStart, EventKind::Departure, EventKind::Drop}) {
    if (to_string(k) == text) {
      return k;
    }
  }
  throw InputError("unknown event kind '" + std::string(text) + "'");
}

std::string
format_double(double x)
{
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
  if (ec != std::errc{}) {
    throw InternalStateError("cannot format double");
  }
  return std::string(buf, end);
}

double
parse_double(std::string_view text)
{
  double x = 0.0;
  auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), x);
  if (ec != std::errc{} || end != text.data() + text.size()) {
    throw InputError("not a number: '" + std::string(text) + "'");
  }
  return x;
}

namespace {

template <typename T>
T
parse_integer(std::string_view text)
{
  T x{};
  auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), x);
  if (ec != std::errc{} || end != text.data() + text.size()) {
    throw InputError("not an integer: '" + std::string(text) + "'");
  }
  return x;
}

// ---------------------------------------------------------------------------
// Scenario JSON

// Reads fields from one JSON object, recording a diagnostic per problem.
class ObjectReader
{
public:
  ObjectReader(const json& obj, std::string path, std::vector<std::string>& errors)
    : m_obj(obj)
    , m_path(std::move(path))
    , m_errors(errors)
  {
    if (!m_obj.is_object()) {
      m_errors.push_back(name() + ": expected an object");
      m_valid = false;
    }
  }

  template <typename T>
  void
  field(const char* key, T& out, bool required = true)
  {
    if (!m_valid) {
      return;
    }
    m_seen.insert(key);
    auto it = m_obj.find(key);
    if (it == m_obj.end()) {
      if (required) {
        m_errors.push_back(prefix() + key + ": missing");
      }
      return;
    }
    try {
      if constexpr (std::is_same_v<T, double>) {
        if (!it->is_number()) {
          throw std::invalid_argument("expected a number");
        }
      }
      else if constexpr (std::is_integral_v<T> && !std::is_same_v<T, bool>) {
        if (!it->is_number_integer()) {
          throw std::invalid_argument("expected an integer");
        }
        if (it->is_number_unsigned() ? it->template get<std::uint64_t>() > std::numeric_limits<T>::max()
                                     : it->template get<std::int64_t>() < 0 ||
                                         static_cast<std::uint64_t>(it->template get<std::int64_t>()) >
                                           std::numeric_limits<T>::max()) {
          throw std::invalid_argument("out of range");
        }
      }
      out = it->template get<T>();
    }
    catch (const std::exception& e) {
      m_errors.push_back(prefix() + key + ": " + e.what());
    }
  }

  const json*
  child(const char* key, bool required = true)
  {
    if (!m_valid) {
      return nullptr;
    }
    m_seen.insert(key);
    auto it = m_obj.find(key);
    if (it == m_obj.end()) {
      if (required) {
        m_errors.push_back(prefix() + key + ": missing");
      }
      return nullptr;
    }
    return &*it;
  }

  void
  reject_unknown()
  {
    if (!m_valid) {
      return;
    }
    for (auto it = m_obj.begin(); it != m_obj.end(); ++it) {
      if (!m_seen.count(it.key())) {
        m_errors.push_back(prefix() + it.key() + ": unknown field");
      }
    }
  }

  std::string
  prefix() const
  {
    return m_path.empty() ? "" : m_path + ".";
  }

  std::string
  name() const
  {
    return m_path.empty() ? "<root>" : m_path;
  }

private:
  const json& m_obj;
  std::string m_path;
  std::vector<std::string>& m_errors;
  std::set<std::string> m_seen;
  bool m_valid = true;
};

json
flow_to_json(const FlowKey& f)
{
  return json{{"src", f.src_addr},
              {"sport", f.src_port},
              {"dst", f.dst_addr},
              {"dport", f.dst_port},
              {"proto", std::string(to_string(f.protocol))}};
}

FlowKey
flow_from_json(const json& doc, const std::string& path, std::vector<std::string>& errors)
{
  FlowKey f;
  ObjectReader r(doc, path, errors);
  r.field("src", f.src_addr);
  r.field("sport", f.src_port);
  r.field("dst", f.dst_addr);
  r.field("dport", f.dst_port);
  std::string proto;
  r.field("proto", proto);
  if (!proto.empty()) {
    try {
      f.protocol = parse_protocol(proto);
    }
    catch (const InputError& e) {
      errors.push_back(r.prefix() + "proto: " + e.what());
    }
  }
  r.reject_unknown();
  return f;
}

json
source_to_json(const SourceSpec& s)
{
  json j{{"kind", std::string(to_string(s.kind))},
         {"flow", flow_to_json(s.flow)},
         {"packet_size", s.packet_size},
         {"start_s", s.start_s},
         {"end_s", s.end_s}};
  switch (s.kind) {
  case SourceKind::Cbr:
  case SourceKind::PoissonBackground:
    j["rate_pps"] = s.rate_pps;
    break;
  case SourceKind::Flood:
    j["rate_pps"] = s.rate_pps;
    j["burst"] = s.burst;
    break;
  case SourceKind::Ftp:
    j["window"] = s.window;
    j["window_cap"] = s.window_cap;
    j["round_trip_s"] = s.round_trip_s;
    break;
  }
  return j;
}

SourceSpec
source_from_json(const json& doc, const std::string& path, std::vector<std::string>& errors)
{
  SourceSpec s;
  ObjectReader r(doc, path, errors);
  std::string kind;
  r.field("kind", kind);
  try {
    s.kind = parse_source_kind(kind);
  }
  catch (const ConfigError&) {
    if (!kind.empty()) {
      errors.push_back(r.prefix() + "kind: unknown source kind '" + kind + "'");
    }
    r.reject_unknown();
    return s;
  }
  if (auto* flow = r.child("flow")) {
    s.flow = flow_from_json(*flow, r.prefix() + "flow", errors);
  }
  r.field("packet_size", s.packet_size);
  r.field("start_s", s.start_s);
  r.field("end_s", s.end_s);
  switch (s.kind) {
  case SourceKind::Cbr:
  case SourceKind::PoissonBackground:
    r.field("rate_pps", s.rate_pps);
    break;
  case SourceKind::Flood:
    r.field("rate_pps", s.rate_pps);
    r.field("burst", s.burst, false);
    break;
  case SourceKind::Ftp:
    r.field("window", s.window, false);
    r.field("window_cap", s.window_cap, false);
    r.field("round_trip_s", s.round_trip_s);
    break;
  }
  r.reject_unknown();
  return s;
}

json
detector_to_json(const DetectorConfig& d)
{
  return json{{"util_threshold", d.util_threshold},
              {"drop_arrival_ratio_threshold", d.drop_arrival_ratio_threshold},
              {"require_buffer_full", d.require_buffer_full},
              {"ewma_alpha", d.ewma_alpha},
              {"ewma_k", d.ewma_k},
              {"consecutive_windows", d.consecutive_windows},
              {"ewma_gating", d.ewma_gating}};
}

DetectorConfig
detector_from_json(const json& doc, std::vector<std::string>& errors)
{
  DetectorConfig d;
  ObjectReader r(doc, "detector", errors);
  r.field("util_threshold", d.util_threshold, false);
  r.field("drop_arrival_ratio_threshold", d.drop_arrival_ratio_threshold, false);
  r.field("require_buffer_full", d.require_buffer_full, false);
  r.field("ewma_alpha", d.ewma_alpha, false);
  r.field("ewma_k", d.ewma_k, false);
  r.field("consecutive_windows", d.consecutive_windows, false);
  r.field("ewma_gating", d.ewma_gating, false);
  r.reject_unknown();
  return d;
}

} // namespace

json
scenario_to_json(const ScenarioConfig& cfg)
{
  json queue{{"mode", cfg.queue_mode == QueueMode::Markovian ? "markovian" : "deterministic"}};
  if (cfg.queue_mode == QueueMode::Markovian) {
    queue["mu"] = cfg.service_rate;
  }
  json sources = json::array();
  for (const auto& s : cfg.sources) {
    sources.push_back(source_to_json(s));
  }
  json floods = json::array();
  for (const auto& s : cfg.attack.floods) {
    floods.push_back(source_to_json(s));
  }
  return json{{"schema_version", ScenarioConfig::kSchemaVersion},
              {"seed", cfg.seed},
              {"horizon_s", cfg.horizon_s},
              {"link_capacity_Bps", cfg.link_capacity_Bps},
              {"queue", queue},
              {"buffer_K", cfg.buffer_K ? json(*cfg.buffer_K) : json(nullptr)},
              {"window_s", cfg.window_s},
              {"sources", sources},
              {"attack", json{{"floods", floods}}},
              {"detector", detector_to_json(cfg.detector)}};
}

ScenarioConfig
scenario_from_json(const json& doc)
{
  std::vector<std::string> errors;
  ScenarioConfig cfg;
  ObjectReader r(doc, "", errors);

  int version = 0;
  r.field("schema_version", version);
  if (version != 0 && version != ScenarioConfig::kSchemaVersion) {
    errors.push_back("schema_version: unsupported version " + std::to_string(version));
  }
  r.field("seed", cfg.seed);
  r.field("horizon_s", cfg.horizon_s);
  r.field("link_capacity_Bps", cfg.link_capacity_Bps);
  r.field("window_s", cfg.window_s, false);

  if (auto* q = r.child("queue")) {
    ObjectReader qr(*q, "queue", errors);
    std::string mode;
    qr.field("mode", mode);
    if (mode == "markovian") {
      cfg.queue_mode = QueueMode::Markovian;
      qr.field("mu", cfg.service_rate);
    }
    else if (mode == "deterministic") {
      cfg.queue_mode = QueueMode::Deterministic;
    }
    else if (!mode.empty()) {
      errors.push_back("queue.mode: expected 'markovian' or 'deterministic'");
    }
    qr.reject_unknown();
  }

  if (auto* k = r.child("buffer_K")) {
    if (k->is_null()) {
      cfg.buffer_K.reset();
    }
    else if (k->is_number_unsigned() && k->get<std::uint64_t>() <= std::numeric_limits<std::uint32_t>::max()) {
      cfg.buffer_K = k->get<std::uint32_t>();
    }
    else {
      errors.emplace_back("buffer_K: expected a non-negative integer or null");
    }
  }

  auto read_list = [&](const json* list, const std::string& path, std::vector<SourceSpec>& out) {
    if (!list) {
      return;
    }
    if (!list->is_array()) {
      errors.push_back(path + ": expected an array");
      return;
    }
    for (std::size_t i = 0; i < list->size(); ++i) {
      out.push_back(source_from_json((*list)[i], path + "[" + std::to_string(i) + "]", errors));
    }
  };
  read_list(r.child("sources"), "sources", cfg.sources);
  if (auto* attack = r.child("attack", false)) {
    ObjectReader ar(*attack, "attack", errors);
    read_list(ar.child("floods"), "attack.floods", cfg.attack.floods);
    ar.reject_unknown();
  }
  if (auto* det = r.child("detector", false)) {
    cfg.detector = detector_from_json(*det, errors);
  }
  r.reject_unknown();

  if (errors.empty()) {
    errors = validation_errors(cfg);
  }
  if (!errors.empty()) {
    throw ConfigError(std::move(errors));
  }
  return cfg;
}

ScenarioConfig
load_scenario(const std::filesystem::path& path)
{
  std::ifstream in(path);
  if (!in) {
    throw ConfigError(path.string() + ": cannot open scenario file");
  }
  json doc;
  try {
    doc = json::parse(in);
  }
  catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  return scenario_from_json(doc);
}

void
save_scenario(const ScenarioConfig& cfg, const std::filesystem::path& path)
{
  std::ofstream out(path);
  if (!out) {
    throw Error(path.string() + ": cannot write scenario file");
  }
  out << scenario_to_json(cfg).dump(2) << '\n';
}

// ---------------------------------------------------------------------------
// CSV

namespace {

std::vector<std::string_view>
split(std::string_view line, char sep)
{
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (true) {
    auto cut = line.find(sep, pos);
    out.push_back(line.substr(pos, cut == std::string_view::npos ? std::string_view::npos : cut - pos));
    if (cut == std::string_view::npos) {
      break;
    }
    pos = cut + 1;
  }
  return out;
}

template <typename RowFn>
void
read_rows(std::istream& is, std::string_view header, std::size_t columns, RowFn&& fn)
{
  std::string line;
  if (!std::getline(is, line) || line != header) {
    throw InputError("unexpected CSV header, want '" + std::string(header) + "'");
  }
  std::size_t lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) {
      continue;
    }
    auto cells = split(line, ',');
    if (cells.size() != columns) {
      throw InputError("line " + std::to_string(lineno) + ": expected " + std::to_string(columns) + " columns");
    }
    fn(cells);
  }
}

constexpr std::string_view kTraceHeader = "time_ns,kind,packet_id,src,sport,dst,dport,proto,size_bytes";
constexpr std::string_view kMetricsHeader = "window_start_s,p_arrivals,p_departures,p_drops,bytes_tx,utilization,"
                                            "flow_count,avg_pkt_size,max_buf,mean_qlen,mean_wait_s";
constexpr std::string_view kAlarmsHeader = "window_start_s,signal,fired_conditions";
constexpr std::string_view kLossHeader = "class,flood_index,arrivals,drops,loss_percent";

} // namespace

TraceCsvWriter::TraceCsvWriter(std::ostream& os)
  : m_os(&os)
{
  *m_os << kTraceHeader << '\n';
}

void
TraceCsvWriter::operator()(const PacketEvent& ev)
{
  *m_os << ev.time << ',' << to_string(ev.kind) << ',' << ev.packet_id << ',' << ev.flow.src_addr << ','
        << ev.flow.src_port << ',' << ev.flow.dst_addr << ',' << ev.flow.dst_port << ','
        << to_string(ev.flow.protocol) << ',' << ev.size << '\n';
}

void
write_trace_csv(std::ostream& os, const EventTrace& trace)
{
  TraceCsvWriter w(os);
  for (const auto& ev : trace.events) {
    w(ev);
  }
}

std::vector<PacketEvent>
read_trace_csv(std::istream& is)
{
  std::vector<PacketEvent> out;
  read_rows(is, kTraceHeader, 9, [&](const std::vector<std::string_view>& c) {
    PacketEvent ev;
    ev.time = parse_integer<TimeNs>(c[0]);
    ev.kind = parse_event_kind(c[1]);
    ev.packet_id = parse_integer<PacketId>(c[2]);
    ev.flow.src_addr = parse_integer<NodeId>(c[3]);
    ev.flow.src_port = parse_integer<Port>(c[4]);
    ev.flow.dst_addr = parse_integer<NodeId>(c[5]);
    ev.flow.dst_port = parse_integer<Port>(c[6]);
    ev.flow.protocol = parse_protocol(c[7]);
    ev.size = parse_integer<std::uint32_t>(c[8]);
    out.push_back(ev);
  });
  return out;
}

void
write_metrics_csv(std::ostream& os, const std::vector<MetricsWindow>& windows)
{
  os << kMetricsHeader << '\n';
  for (const auto& w : windows) {
    os << format_double(w.window_start) << ',' << w.p_arrivals << ',' << w.p_departures << ',' << w.p_drops << ','
       << w.bytes_transmitted << ',' << format_double(w.bandwidth_utilization) << ',' << w.flow_count << ','
       << format_double(w.avg_packet_size) << ',' << w.max_buffer_occupancy << ','
       << format_double(w.mean_queue_length) << ',' << format_double(w.mean_wait) << '\n';
  }
}

std::vector<MetricsWindow>
read_metrics_csv(std::istream& is, double window_s, double horizon_s)
{
  std::vector<MetricsWindow> out;
  read_rows(is, kMetricsHeader, 11, [&](const std::vector<std::string_view>& c) {
    MetricsWindow w;
    w.window_start = parse_double(c[0]);
    w.p_arrivals = parse_integer<std::uint64_t>(c[1]);
    w.p_departures = parse_integer<std::uint64_t>(c[2]);
    w.p_drops = parse_integer<std::uint64_t>(c[3]);
    w.bytes_transmitted = parse_integer<std::uint64_t>(c[4]);
    w.bandwidth_utilization = parse_double(c[5]);
    w.flow_count = parse_integer<std::uint64_t>(c[6]);
    w.avg_packet_size = parse_double(c[7]);
    w.max_buffer_occupancy = parse_integer<std::uint64_t>(c[8]);
    w.mean_queue_length = parse_double(c[9]);
    w.mean_wait = parse_double(c[10]);
    w.bytes_arrived = static_cast<std::uint64_t>(std::llround(w.avg_packet_size * static_cast<double>(w.p_arrivals)));
    out.push_back(w);
  });
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i].window_end = i + 1 < out.size() ? out[i + 1].window_start
                                           : std::min(out[i].window_start + window_s, horizon_s);
  }
  return out;
}

void
write_alarms_csv(std::ostream& os, const std::vector<AlarmSignal>& signals)
{
  os << kAlarmsHeader << '\n';
  for (const auto& s : signals) {
    os << format_double(s.window_start) << ',' << s.value << ',' << s.fired_conditions.to_string() << '\n';
  }
}

std::vector<AlarmSignal>
read_alarms_csv(std::istream& is)
{
  std::vector<AlarmSignal> out;
  read_rows(is, kAlarmsHeader, 3, [&](const std::vector<std::string_view>& c) {
    AlarmSignal s;
    s.window_start = parse_double(c[0]);
    s.value = parse_integer<int>(c[1]);
    if (s.value != 0 && s.value != 1) {
      throw InputError("signal must be 0 or 1");
    }
    s.fired_conditions = ConditionSet::parse(c[2]);
    out.push_back(s);
  });
  return out;
}

void
write_loss_csv(std::ostream& os, const LossTable& table)
{
  os << kLossHeader << '\n';
  for (const auto& r : table.rows) {
    os << to_string(r.traffic_class) << ',' << r.flood_index << ',' << r.arrivals << ',' << r.drops << ','
       << format_double(r.loss_percent) << '\n';
  }
}

// ---------------------------------------------------------------------------
// Report JSON

json
to_json(const LittleReport& r)
{
  return json{{"lambda_offered", r.lambda_offered},
              {"lambda_measured", r.lambda_measured},
              {"N", r.N_measured},
              {"W", r.W_measured},
              {"Nq", r.Nq_measured},
              {"Wq", r.Wq_measured},
              {"residual_N", r.residual_N},
              {"residual_Nq", r.residual_Nq},
              {"arrivals", r.arrivals},
              {"admitted", r.admitted},
              {"departures", r.departures},
              {"drops", r.drops}};
}

json
to_json(const ClassificationReport& r)
{
  json latency = json::array();
  for (const auto& l : r.detection_latency_s) {
    latency.push_back(l ? json(*l) : json(nullptr));
  }
  return json{{"accuracy", r.accuracy},
              {"precision", r.precision},
              {"recall", r.recall},
              {"confusion",
               {{"true_positive", r.confusion.true_positive},
                {"false_positive", r.confusion.false_positive},
                {"true_negative", r.confusion.true_negative},
                {"false_negative", r.confusion.false_negative}}},
              {"detection_latency_s", latency},
              {"alarm_windows", r.alarm_windows}};
}

json
to_json(const LossTable& t)
{
  json rows = json::array();
  for (const auto& r : t.rows) {
    rows.push_back(json{{"class", std::string(to_string(r.traffic_class))},
                        {"flood_index", r.flood_index},
                        {"arrivals", r.arrivals},
                        {"drops", r.drops},
                        {"loss_percent", r.loss_percent}});
  }
  auto base = [](const std::optional<ClassLoss>& b) {
    return b ? json{{"arrivals", b->arrivals}, {"drops", b->drops}, {"loss_percent", b->loss_percent}}
             : json(nullptr);
  };
  return json{{"rows", rows}, {"baseline", {{"CBR", base(t.baseline_cbr)}, {"FTP", base(t.baseline_ftp)}}},
              {"notes", t.notes}};
}

} // namespace floodgate
