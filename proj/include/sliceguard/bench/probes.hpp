#pragma once

#include "sliceguard/orch/orchestrator.hpp"

namespace sliceguard::bench {

struct UnknownInterface : std::runtime_error {
  explicit UnknownInterface(const std::string& what) : std::runtime_error(what) {}
};
struct EmptyProbe : std::runtime_error {
  explicit EmptyProbe(const std::string& what) : std::runtime_error(what) {}
};

struct ProbeStats {
  std::string interface;
  std::string metric;  // latency | throughput | srt
  int count = 0;
  double min = 0, mean = 0, max = 0, mdev = 0;
  std::string unit;  // ms | Mbps
};

ProbeStats stats_from(const std::string& interface, const std::string& metric,
                      const std::string& unit, const std::vector<double>& samples);

struct ProbeDefaults {
  int latency_count = 1000;
  double latency_interval_ms = 0.0;
  size_t latency_payload = 56;
  double throughput_duration_s = 10.0;
  size_t throughput_payload = 1420;
  int throughput_window = 512;
  int srt_attaches = 10;
};

// Drives measurements over a ready NS instance in virtual time.
class ProbeRunner {
 public:
  ProbeRunner(orch::Orchestrator& orch, orch::NsInstance& ns);

  // echo round trips between the edge endpoint and its counterpart
  ProbeStats latency(const std::string& link_name, int count,
                     double interval_ms, size_t payload);

  // greedy unidirectional stream, core side toward the edge endpoint
  struct Stream;
  std::shared_ptr<Stream> begin_throughput(const std::string& link_name,
                                           double duration_s, size_t payload,
                                           int window);
  ProbeStats finish_throughput(const std::shared_ptr<Stream>& stream);
  ProbeStats throughput(const std::string& link_name, double duration_s,
                        size_t payload, int window);

  // sequential attaches; SRT measured at the MME over the AIR/AIA exchange
  ProbeStats srt(int attach_count, int* rejected_out = nullptr);

  eps::AttachContext attach(const std::string& imsi);

  // user plane through the UE over Uu
  ProbeStats ue_latency(int count, size_t payload);
  ProbeStats ue_throughput(double duration_s, size_t payload, int window);

 private:
  struct LinkSide {
    std::string edge;  // echo initiator / stream sink
    std::string core;  // stream source
  };
  LinkSide endpoints_of(const std::string& link_name) const;

  orch::Orchestrator& orch_;
  orch::NsInstance& ns_;
  netem::Fabric& fabric_;
  uint64_t next_stream_id_ = 1;
};

}  // namespace sliceguard::bench
