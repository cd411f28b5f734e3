#include "sliceguard/bench/probes.hpp"

#include <cmath>

namespace sliceguard::bench {

using tunnel::SimTime;
using tunnel::kMillisecond;
using tunnel::kSecond;

ProbeStats stats_from(const std::string& interface, const std::string& metric,
                      const std::string& unit, const std::vector<double>& samples) {
  if (samples.empty()) throw EmptyProbe(metric + " probe yielded no samples");
  ProbeStats s;
  s.interface = interface;
  s.metric = metric;
  s.unit = unit;
  s.count = int(samples.size());
  double sum = 0, sum_sq = 0;
  s.min = samples[0];
  s.max = samples[0];
  for (double v : samples) {
    sum += v;
    sum_sq += v * v;
    s.min = std::min(s.min, v);
    s.max = std::max(s.max, v);
  }
  s.mean = sum / double(samples.size());
  double var = sum_sq / double(samples.size()) - s.mean * s.mean;
  s.mdev = var > 0 ? std::sqrt(var) : 0.0;
  return s;
}

ProbeRunner::ProbeRunner(orch::Orchestrator& orch, orch::NsInstance& ns)
    : orch_(orch), ns_(ns), fabric_(orch.fabric()) {
  if (ns.phase != orch::Phase::ready)
    throw orch::NotReady("ns " + ns.id + " is " + orch::to_string(ns.phase));
}

ProbeRunner::LinkSide ProbeRunner::endpoints_of(const std::string& link_name) const {
  const orch::CatalogEntry* entry = orch_.catalog_entry(ns_.nsd_id);
  for (const auto& link : entry->pkg.nsd->virtual_links) {
    if (link.name != link_name) continue;
    const desc::NsdMember* a = entry->pkg.nsd->find_member(link.endpoints[0].member_index);
    const desc::NsdMember* b = entry->pkg.nsd->find_member(link.endpoints[1].member_index);
    return {a->vnfd_id, b->vnfd_id};
  }
  throw UnknownInterface("ns " + ns_.id + " has no interface " + link_name);
}

ProbeStats ProbeRunner::latency(const std::string& link_name, int count,
                                double interval_ms, size_t payload) {
  if (count < 1) throw EmptyProbe("latency probe needs count >= 1");
  LinkSide side = endpoints_of(link_name);
  orch::UnitRuntime& edge = ns_.unit(side.edge);

  // find the edge unit's interface bound to this virtual link
  const orch::CatalogEntry* entry = orch_.catalog_entry(ns_.nsd_id);
  std::string iface;
  for (const auto& link : entry->pkg.nsd->virtual_links) {
    if (link.name != link_name) continue;
    iface = link.endpoints[0].interface;
  }

  std::vector<double> samples;
  samples.reserve(size_t(count));
  uint64_t stream = next_stream_id_++;
  SimTime rtt = -1;
  edge.set_probe_hook([&](const std::string& from_iface, const eps::EpsMessage& m,
                          SimTime t) {
    if (m.kind != eps::MsgKind::EchoReply || from_iface != iface) return false;
    const std::string* sid = m.find("stream");
    if (!sid || std::stoull(*sid) != stream) return false;
    rtt = t;
    return true;
  });

  std::string filler(payload, 'x');
  for (int i = 0; i < count; ++i) {
    SimTime t0 = fabric_.clock().now();
    rtt = -1;
    eps::EpsMessage echo = eps::EpsMessage::make(
        eps::MsgKind::EchoRequest, {{"probe", "1"},
                                    {"stream", std::to_string(stream)},
                                    {"echo_id", std::to_string(i)},
                                    {"payload", filler}});
    edge.send_message(iface, echo);
    fabric_.run_until_idle();
    if (rtt < 0) throw EmptyProbe("echo " + std::to_string(i) + " was not answered");
    samples.push_back(double(rtt - t0) / double(kMillisecond));
    SimTime next_at = t0 + netem::ms_to_sim(interval_ms);
    if (fabric_.clock().now() < next_at)
      fabric_.advance(next_at - fabric_.clock().now());
  }
  edge.set_probe_hook(nullptr);
  return stats_from(link_name, "latency", "ms", samples);
}

struct ProbeRunner::Stream {
  std::string link_name;
  std::string sink_unit;
  std::string source_unit;
  std::string source_iface;
  uint64_t id = 0;
  size_t payload = 0;
  SimTime window = 0;
  SimTime first_delivery = -1;
  uint64_t bytes_in_window = 0;
  bool stopped = false;
};

std::shared_ptr<ProbeRunner::Stream> ProbeRunner::begin_throughput(
    const std::string& link_name, double duration_s, size_t payload, int window) {
  LinkSide side = endpoints_of(link_name);
  const orch::CatalogEntry* entry = orch_.catalog_entry(ns_.nsd_id);
  std::string source_iface, sink_iface;
  for (const auto& link : entry->pkg.nsd->virtual_links) {
    if (link.name != link_name) continue;
    sink_iface = link.endpoints[0].interface;
    source_iface = link.endpoints[1].interface;
  }

  auto stream = std::make_shared<Stream>();
  stream->link_name = link_name;
  stream->sink_unit = side.edge;
  stream->source_unit = side.core;
  stream->source_iface = source_iface;
  stream->id = next_stream_id_++;
  stream->payload = payload;
  stream->window = SimTime(llround(duration_s * double(kSecond)));

  orch::UnitRuntime& sink = ns_.unit(side.edge);
  orch::UnitRuntime& source = ns_.unit(side.core);

  // stream frames are raw: 8-byte marker + filler
  Bytes frame(payload, 'x');
  store_le64(frame.data(), stream->id);

  orch::UnitRuntime* source_ptr = &source;
  std::weak_ptr<Stream> weak = stream;
  sink.set_raw_hook([weak, source_ptr, sink_iface](const std::string& iface,
                                                   std::span<const uint8_t> data,
                                                   SimTime t) {
    auto s = weak.lock();
    if (!s) return false;
    if (iface != sink_iface || data.size() < 8) return false;
    if (load_le64(data.data()) != s->id) return false;
    if (s->first_delivery < 0) s->first_delivery = t;
    if (t < s->first_delivery + s->window) {
      s->bytes_in_window += data.size();
      if (!s->stopped) {
        Bytes next(s->payload, 'x');
        store_le64(next.data(), s->id);
        source_ptr->send_raw(s->source_iface, next);
      }
    } else {
      s->stopped = true;
    }
    return true;
  });

  for (int i = 0; i < window; ++i) source.send_raw(source_iface, frame);
  return stream;
}

ProbeStats ProbeRunner::finish_throughput(const std::shared_ptr<Stream>& stream) {
  ns_.unit(stream->sink_unit).set_raw_hook(nullptr);
  if (stream->first_delivery < 0)
    throw EmptyProbe("stream on " + stream->link_name + " delivered nothing");
  double mbps = double(stream->bytes_in_window) * 8.0 /
                (double(stream->window) / double(kSecond)) / 1e6;
  return stats_from(stream->link_name, "throughput", "Mbps", {mbps});
}

ProbeStats ProbeRunner::throughput(const std::string& link_name, double duration_s,
                                   size_t payload, int window) {
  auto stream = begin_throughput(link_name, duration_s, payload, window);
  fabric_.run_until_idle();
  return finish_throughput(stream);
}

eps::AttachContext ProbeRunner::attach(const std::string& imsi) {
  auto* ue = ns_.app_of<eps::UeApp>("ue");
  auto* mme = ns_.app_of<eps::MmeApp>("mme");
  if (!ue || !mme) throw orch::UnknownEntity("ns lacks ue/mme units");
  ue->reset();
  ue->start_attach(ns_.unit("ue"), imsi);
  fabric_.run_until_idle();
  const eps::AttachContext* ctx = mme->context(imsi);
  if (!ctx) {
    eps::AttachContext missing;
    missing.imsi = imsi;
    return missing;
  }
  return *ctx;
}

ProbeStats ProbeRunner::srt(int attach_count, int* rejected_out) {
  if (attach_count < 1) throw EmptyProbe("srt probe needs attach_count >= 1");
  auto* mme = ns_.app_of<eps::MmeApp>("mme");
  if (!mme) throw orch::UnknownEntity("ns lacks an mme unit");
  mme->clear_stats();
  const auto& subscribers = orch_.options().subscribers;
  for (int i = 0; i < attach_count; ++i) {
    const std::string& imsi = subscribers[size_t(i) % subscribers.size()].imsi;
    attach(imsi);
  }
  if (rejected_out) *rejected_out = mme->rejected_count();
  std::vector<double> samples;
  for (const auto& s : mme->srt_samples()) samples.push_back(s.srt_ms());
  return stats_from("S6a", "srt", "ms", samples);
}

ProbeStats ProbeRunner::ue_latency(int count, size_t payload) {
  if (count < 1) throw EmptyProbe("ue latency probe needs count >= 1");
  auto* ue = ns_.app_of<eps::UeApp>("ue");
  if (!ue || !ue->attached()) throw eps::NotAttached();
  orch::UnitRuntime& ue_unit = ns_.unit("ue");

  std::vector<double> samples;
  SimTime reply_at = -1;
  int want_id = 0;
  ue->set_delivery_hook([&](const eps::EpsMessage& m, SimTime t) {
    const std::string* echo = m.find("echo_id");
    if (echo && std::stoi(*echo) == want_id) reply_at = t;
  });
  std::string filler(payload, 'x');
  for (int i = 0; i < count; ++i) {
    want_id = i;
    reply_at = -1;
    SimTime t0 = fabric_.clock().now();
    ue->send_user_payload(ue_unit,
                          eps::EpsMessage::make(eps::MsgKind::GtpData,
                                                {{"dir", "ul"},
                                                 {"echo_id", std::to_string(i)},
                                                 {"payload", filler}}));
    fabric_.run_until_idle();
    if (reply_at < 0) throw EmptyProbe("user-plane echo was not answered");
    samples.push_back(double(reply_at - t0) / double(kMillisecond));
  }
  ue->set_delivery_hook(nullptr);
  return stats_from("Uu", "latency", "ms", samples);
}

ProbeStats ProbeRunner::ue_throughput(double duration_s, size_t payload, int window) {
  auto* ue = ns_.app_of<eps::UeApp>("ue");
  auto* mme = ns_.app_of<eps::MmeApp>("mme");
  if (!ue || !ue->attached()) throw eps::NotAttached();
  const eps::AttachContext* ctx = nullptr;
  for (const auto& sub : orch_.options().subscribers) {
    const eps::AttachContext* c = mme->context(sub.imsi);
    if (c && c->state == eps::AttachState::attached) ctx = c;
  }
  if (!ctx) throw eps::NotAttached();

  orch::UnitRuntime& spgwu = ns_.unit("spgwu");
  SimTime window_ns = SimTime(llround(duration_s * double(kSecond)));
  SimTime first = -1;
  uint64_t bytes = 0;
  bool stopped = false;
  std::string filler(payload, 'x');
  uint64_t teid_dl = ctx->teid_dl;

  auto send_one = [&spgwu, &filler, teid_dl]() {
    spgwu.send_message(
        "s1u", eps::EpsMessage::make(eps::MsgKind::GtpData,
                                     {{"teid", std::to_string(teid_dl)},
                                      {"dir", "dl"},
                                      {"stream", "dl"},
                                      {"payload", filler}}));
  };
  ue->set_delivery_hook([&](const eps::EpsMessage& m, SimTime t) {
    if (!m.find("stream")) return;
    if (first < 0) first = t;
    if (t < first + window_ns) {
      bytes += m.get("payload").size();
      if (!stopped) send_one();
    } else {
      stopped = true;
    }
  });
  for (int i = 0; i < window; ++i) send_one();
  fabric_.run_until_idle();
  ue->set_delivery_hook(nullptr);
  if (first < 0) throw EmptyProbe("downlink stream delivered nothing");
  double mbps = double(bytes) * 8.0 / (double(window_ns) / double(kSecond)) / 1e6;
  return stats_from("Uu", "throughput", "Mbps", {mbps});
}

}  // namespace sliceguard::bench
