#pragma once

// Deterministic synthetic log corpora in the loghub structured-CSV shape.
// Used by the data generator tool and the integration tests; real loghub
// CSVs drop into the same directory layout.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "uniparser/common.hpp"
#include "uniparser/corpus.hpp"
#include "uniparser/labels.hpp"
#include "uniparser/tokenizer.hpp"

namespace uniparser {

struct SyntheticRow {
  std::string content;
  std::string truth_template;
};

using Filler = std::function<std::string(std::mt19937_64&)>;

struct PatternSpec {
  std::string template_text;  // with <*> slots
  std::vector<Filler> fillers;
  int weight = 1;
};

struct SourceSpec {
  std::string name;
  std::vector<PatternSpec> patterns;
};

namespace fill {

inline int pick(std::mt19937_64& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

inline std::string digits(std::mt19937_64& rng, int count) {
  std::string out;
  out.reserve(count);
  for (int i = 0; i < count; ++i) out += static_cast<char>('0' + pick(rng, i == 0 ? 1 : 0, 9));
  return out;
}

inline std::string hex_digits(std::mt19937_64& rng, int count) {
  static const char* kHex = "0123456789abcdef";
  std::string out;
  out.reserve(count);
  for (int i = 0; i < count; ++i) out += kHex[pick(rng, 0, 15)];
  return out;
}

inline Filler num(int lo, int hi) {
  return [lo, hi](std::mt19937_64& rng) { return std::to_string(pick(rng, lo, hi)); };
}

inline Filler pct() {
  return [](std::mt19937_64& rng) { return std::to_string(pick(rng, 0, 100)) + "%"; };
}

// "0.2477829"-style fraction with the given number of decimals.
inline Filler fnum(int decimals) {
  return [decimals](std::mt19937_64& rng) {
    std::string out = std::to_string(pick(rng, 0, 9));
    out += '.';
    for (int i = 0; i < decimals; ++i) out += static_cast<char>('0' + pick(rng, 0, 9));
    return out;
  };
}

inline std::string ip_value(std::mt19937_64& rng) {
  const std::string first = pick(rng, 0, 1) ? "10" : std::to_string(pick(rng, 11, 223));
  return first + "." + std::to_string(pick(rng, 0, 255)) + "." +
         std::to_string(pick(rng, 0, 255)) + "." + std::to_string(pick(rng, 1, 254));
}

inline std::string port_value(std::mt19937_64& rng) {
  return std::to_string(pick(rng, 1024, 65535));
}

inline Filler ip() {
  return [](std::mt19937_64& rng) { return ip_value(rng); };
}

inline Filler ip_port() {
  return [](std::mt19937_64& rng) { return ip_value(rng) + ":" + port_value(rng); };
}

inline Filler slash_ip_port() {
  return [](std::mt19937_64& rng) { return "/" + ip_value(rng) + ":" + port_value(rng); };
}

inline Filler slash_ip() {
  return [](std::mt19937_64& rng) { return "/" + ip_value(rng); };
}

inline Filler hex_id(int len) {
  return [len](std::mt19937_64& rng) { return "0x" + hex_digits(rng, len); };
}

inline Filler uuid() {
  return [](std::mt19937_64& rng) {
    std::string out;
    for (int i = 0; i < 32; ++i) {
      if (i == 8 || i == 12 || i == 16 || i == 20) out += '-';
      out += hex_digits(rng, 1);
    }
    return out;
  };
}

inline Filler block_id() {
  return [](std::mt19937_64& rng) {
    std::string out = "blk_";
    if (pick(rng, 0, 1)) out += '-';
    out += digits(rng, 18);
    return out;
  };
}

inline Filler choice(std::vector<std::string> pool) {
  return [pool = std::move(pool)](std::mt19937_64& rng) {
    return pool[pick(rng, 0, static_cast<int>(pool.size()) - 1)];
  };
}

inline Filler path() {
  return [](std::mt19937_64& rng) {
    static const std::vector<std::string> kDirs = {"usr", "var",  "data", "hadoop",
                                                   "user", "root", "opt",  "mnt"};
    static const std::vector<std::string> kExt = {".log", ".dat", ".jar", ".tmp", ".img"};
    std::string out;
    const int depth = pick(rng, 2, 3);
    for (int i = 0; i < depth; ++i)
      out += "/" + kDirs[pick(rng, 0, static_cast<int>(kDirs.size()) - 1)];
    out += "/part-" + digits(rng, 5) + kExt[pick(rng, 0, static_cast<int>(kExt.size()) - 1)];
    return out;
  };
}

inline Filler host() {
  return [](std::mt19937_64& rng) {
    static const std::vector<std::string> kBase = {"node", "app",  "db",   "web", "cache",
                                                   "srv",  "data", "mail", "ns"};
    static const std::vector<std::string> kDomain = {".local", ".cluster.net",
                                                     ".prod.example.com", ".dc1.internal"};
    return kBase[pick(rng, 0, static_cast<int>(kBase.size()) - 1)] +
           digits(rng, pick(rng, 1, 3)) +
           kDomain[pick(rng, 0, static_cast<int>(kDomain.size()) - 1)];
  };
}

// Numeric ip:port. Hostname-shaped addresses stay out of colon-joined slots:
// alpha host:port belongs to the sources whose truth splits host and port.
inline Filler host_port() {
  return [](std::mt19937_64& rng) { return ip_value(rng) + ":" + port_value(rng); };
}

inline Filler user() {
  return choice({"root", "admin", "guest", "cyrus", "news", "uucp", "oracle", "nagios", "backup",
                 "deploy"});
}

inline Filler attempt_id() {
  return [](std::mt19937_64& rng) {
    return "attempt_" + digits(rng, 13) + "_0" + digits(rng, 3) + "_m_000" + digits(rng, 3) +
           "_" + std::to_string(pick(rng, 0, 3));
  };
}

inline Filler container_id() {
  return [](std::mt19937_64& rng) {
    return "container_" + digits(rng, 13) + "_" + digits(rng, 4) + "_01_" + digits(rng, 6);
  };
}

inline Filler job_id() {
  return [](std::mt19937_64& rng) { return "job_" + digits(rng, 13) + "_" + digits(rng, 4); };
}

inline Filler size_with_unit() {
  return [](std::mt19937_64& rng) {
    static const std::vector<std::string> kUnit = {"B", "KB", "MB"};
    return digits(rng, pick(rng, 2, 3)) + "." + std::to_string(pick(rng, 0, 9)) + " " +
           kUnit[pick(rng, 0, 2)];
  };
}

inline Filler mac() {
  return [](std::mt19937_64& rng) {
    std::string out;
    for (int i = 0; i < 6; ++i) {
      if (i) out += ':';
      out += hex_digits(rng, 2);
    }
    return out;
  };
}

inline Filler mmss() {
  return [](std::mt19937_64& rng) {
    char buf[8];
    std::snprintf(buf, sizeof(buf), "%02d:%02d", pick(rng, 0, 59), pick(rng, 0, 59));
    return std::string(buf);
  };
}

inline Filler time_of_day() {
  return [](std::mt19937_64& rng) {
    char buf[12];
    std::snprintf(buf, sizeof(buf), "%02d:%02d:%02d", pick(rng, 0, 23), pick(rng, 0, 59),
                  pick(rng, 0, 59));
    return std::string(buf);
  };
}

inline Filler iso_timestamp() {
  return [](std::mt19937_64& rng) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02dT%02d:%02d:%02d.%07dZ",
                  pick(rng, 2015, 2017), pick(rng, 1, 12), pick(rng, 1, 28), pick(rng, 0, 23),
                  pick(rng, 0, 59), pick(rng, 0, 59), pick(rng, 0, 9999999));
    return std::string(buf);
  };
}

inline Filler version4() {
  return [](std::mt19937_64& rng) {
    return std::to_string(pick(rng, 1, 9)) + "." + std::to_string(pick(rng, 0, 9)) + "." +
           digits(rng, 4) + "." + digits(rng, 5);
  };
}

}  // namespace fill

// Runtime state words: parameters in "... to <*>" style slots across several
// sources, plain literals elsewhere. The overlap is what makes token-only
// classification insufficient.
inline const std::vector<std::string>& state_words() {
  static const std::vector<std::string> kWords = {"active",    "idle",        "paused",
                                                  "stopped",   "started",     "connected",
                                                  "disconnected", "waiting"};
  return kWords;
}

inline SyntheticRow render(const PatternSpec& pattern, std::mt19937_64& rng) {
  SyntheticRow row;
  row.truth_template = pattern.template_text;
  std::size_t at = 0;
  std::size_t slot = 0;
  for (std::size_t pos = pattern.template_text.find("<*>", at); pos != std::string::npos;
       pos = pattern.template_text.find("<*>", at)) {
    row.content.append(pattern.template_text, at, pos - at);
    if (slot >= pattern.fillers.size())
      throw DataError("render: not enough fillers for " + pattern.template_text);
    row.content += pattern.fillers[slot++](rng);
    at = pos + 3;
  }
  row.content.append(pattern.template_text, at, pattern.template_text.size() - at);
  if (slot != pattern.fillers.size())
    throw DataError("render: unused fillers for " + pattern.template_text);
  return row;
}

inline std::vector<SyntheticRow> make_rows(const std::vector<PatternSpec>& patterns, int n,
                                           std::uint64_t seed) {
  if (patterns.empty()) throw DataError("make_rows: no patterns");
  int total_weight = 0;
  for (const PatternSpec& p : patterns) total_weight += p.weight;
  std::mt19937_64 rng(seed);
  std::vector<SyntheticRow> rows;
  rows.reserve(n);
  for (int i = 0; i < n; ++i) {
    int r = fill::pick(rng, 0, total_weight - 1);
    std::size_t idx = 0;
    while (r >= patterns[idx].weight) r -= patterns[idx++].weight;
    rows.push_back(render(patterns[idx], rng));
  }
  return rows;
}

// Five fully learnable templates: every parameter carries digits, every
// literal is a plain word.
inline std::vector<PatternSpec> toy_patterns() {
  using namespace fill;
  // Parameters stay digit-dominant so the task is cleanly learnable inside
  // the short default training budget.
  const Filler numeric_id = [](std::mt19937_64& rng) { return "0x" + digits(rng, 8); };
  const Filler wide_ip = [](std::mt19937_64& rng) {
    std::string out = std::to_string(pick(rng, 100, 255));
    for (int i = 0; i < 3; ++i) out += "." + std::to_string(pick(rng, 100, 255));
    return out;
  };
  return {
      {"User <*> logged in from host <*> on port <*> with session <*>",
       {[](std::mt19937_64& rng) { return "u" + digits(rng, 4); }, wide_ip, num(1024, 65535),
        numeric_id},
       1},
      {"Connection <*> closed after <*> ms of idle time with code <*>",
       {num(1, 99999), num(10, 900000), num(200, 599)},
       1},
      {"Failed to read file <*> at offset <*> error code <*> retrying",
       {path(), num(0, 1 << 30), num(1, 255)},
       1},
      {"Service worker <*> restarted on port <*> after <*> failed checks",
       {num(1, 64), num(1024, 65535), num(1, 50)},
       1},
      {"Cache entry <*> evicted after <*> seconds total size <*> bytes",
       {numeric_id, num(1, 86400), num(16, 1 << 24)},
       1},
  };
}

// Sixteen sources shaped after well-known public log sets. Template counts,
// parameter kinds and token shapes (addresses, ids, sizes, states, paths)
// loosely follow the real systems so cross-source transfer is meaningful.
inline std::vector<SourceSpec> benchmark_sources() {
  using namespace fill;
  const Filler state = choice(state_words());
  std::vector<SourceSpec> sources;

  sources.push_back(
      {"HDFS",
       {
           {"Receiving block <*> src: <*> dest: <*>",
            {block_id(), slash_ip_port(), slash_ip_port()}, 20},
           {"PacketResponder <*> for block <*> terminating", {num(0, 3), block_id()}, 12},
           {"BLOCK* NameSystem.addStoredBlock: blockMap updated: <*> is added to <*> size <*>",
            {ip_port(), block_id(), num(512, 67108864)}, 12},
           {"Verification succeeded for <*>", {block_id()}, 8},
           {"Deleting block <*> file <*>", {block_id(), path()}, 8},
           {"BLOCK* NameSystem.allocateBlock: <*> <*>", {path(), block_id()}, 10},
           {"Received block <*> of size <*> from <*>",
            {block_id(), num(512, 67108864), slash_ip()}, 10},
           {"Starting thread to transfer block <*> to <*>", {block_id(), ip_port()}, 6},
       }});

  sources.push_back(
      {"Hadoop",
       {
           {"Starting task <*>", {attempt_id()}, 8},
           {"Task <*> done.", {attempt_id()}, 6},
           {"Progress of TaskAttempt <*> is : <*>", {attempt_id(), fnum(7)}, 8},
           {"Address change detected. Old: <*> New: <*>", {host_port(), host_port()}, 8},
           {"Opening proxy : <*>", {host_port()}, 10},
           {"Connecting to ResourceManager at <*>",
            {[h = host()](std::mt19937_64& rng) {
               return h(rng) + "/" + ip_value(rng) + ":" + port_value(rng);
             }}, 6},
           {"Retrying connect to server: <*>. Already tried <*> time(s)",
            {[h = host()](std::mt19937_64& rng) {
               return h(rng) + "/" + ip_value(rng) + ":" + port_value(rng);
             },
             num(0, 9)}, 8},
           {"Read <*> bytes from map-output for <*>", {num(4096, 9999999), attempt_id()}, 8},
           {"Num completed Tasks: <*>", {num(0, 9)}, 5},
           {"Processing split: hdfs://<*>",
            {[](std::mt19937_64& rng) {
               return ip_value(rng) + ":" + port_value(rng) + "/pageinput" +
                      std::to_string(pick(rng, 1, 9)) + ".txt:" + digits(rng, 9) + "+" +
                      digits(rng, 8);
             }}, 4},
           {"The url to track the job: http://<*>",
            {[](std::mt19937_64& rng) {
               return ip_value(rng) + ":" + port_value(rng) + "/proxy/application_" +
                      digits(rng, 13) + "_" + digits(rng, 4) + "/";
             }}, 6},
           {"IPC Server handler <*> on <*> caught an exception", {num(0, 31), num(8020, 50070)},
            4},
           {"Memory usage of ProcessTree <*> for container-id <*> is <*>",
            {num(3, 99999), container_id(), size_with_unit()}, 5},
           {"Error contacting RM. Retrying after <*> ms", {num(100, 30000)}, 4},
           {"Reduce slow start threshold not met. completedMapsForReduceSlowstart <*>",
            {num(1, 500)}, 3},
           {"Running job: <*>", {job_id()}, 6},
           {"Job <*> running in uber mode : <*>", {job_id(), choice({"true", "false"})}, 4},
           {"map <*> reduce <*>", {pct(), pct()}, 6},
           {"Assigned container <*> on host <*>", {container_id(), host_port()}, 5},
           {"<*> TaskAttempt Transitioned from <*> to <*>",
            {attempt_id(),
             choice({"NEW", "UNASSIGNED", "ASSIGNED", "RUNNING", "COMMIT_PENDING"}),
             choice({"ASSIGNED", "RUNNING", "SUCCESS_CONTAINER_CLEANUP", "SUCCEEDED"})}, 6},
           {"<*> Container Transitioned from <*> to <*>",
            {container_id(), choice({"NEW", "LOCALIZING", "LOCALIZED", "RUNNING"}),
             choice({"LOCALIZED", "RUNNING", "EXITED_WITH_SUCCESS", "DONE"})}, 5},
           {"Finished spill <*>", {num(0, 9)}, 4},
           {"Starting flush of map output", {}, 4},
           {"data buffer = <*>",
            {[](std::mt19937_64& rng) { return digits(rng, 9) + "/" + digits(rng, 9); }}, 3},
           {"Adding #<*> tokens and #<*> secret keys for NM use for launching container",
            {num(1, 9), num(1, 9)}, 3},
           {"Default file system [hdfs://<*>]", {host_port()}, 6},
           {"Instantiated MRClientService at <*>", {host_port()}, 4},
           {"Stopping server on <*>", {num(8020, 50070)}, 3},
           {"Scheduled snapshot period at <*> second(s).", {num(10, 60)}, 3},
           {"Event Writer setup for JobId: <*>, File: <*>", {job_id(), path()}, 3},
       }});

  const Filler spark_block = [](std::mt19937_64& rng) -> std::string {
    switch (fill::pick(rng, 0, 2)) {
      case 0:
        return "broadcast_" + std::to_string(fill::pick(rng, 0, 99)) + "_piece" +
               std::to_string(fill::pick(rng, 0, 3));
      case 1:
        return "rdd_" + std::to_string(fill::pick(rng, 0, 99)) + "_" +
               std::to_string(fill::pick(rng, 0, 99));
      default:
        return "input-" + std::to_string(fill::pick(rng, 0, 3)) + "-" + fill::digits(rng, 13);
    }
  };
  sources.push_back(
      {"Spark",
       {
           {"Starting executor ID <*> on host <*>", {num(0, 64), host()}, 6},
           {"Got assigned task <*>", {num(0, 9999)}, 8},
           {"Finished task <*> in stage <*> (TID <*>) in <*> ms on <*> (executor <*>)",
            {fnum(1), fnum(1), num(0, 9999), num(1, 60000), host(), num(0, 64)}, 8},
           {"Block <*> stored as values in memory (estimated size <*>, free <*>)",
            {spark_block, size_with_unit(), size_with_unit()}, 6},
           {"Removed <*> on <*> in memory (size: <*>, free: <*>)",
            {spark_block, ip_port(), size_with_unit(), size_with_unit()}, 6},
           {"Saved output of task '<*>' to <*>", {attempt_id(), path()}, 4},
           {"Registering block manager <*> with <*> RAM", {ip_port(), size_with_unit()}, 8},
           {"Registering block manager <*> with <*> RAM, BlockManagerId(<*>, <*>, <*>)",
            {ip_port(), size_with_unit(), num(0, 9), ip(), num(30000, 60000)}, 5},
           {"Successfully created connection to <*> after <*> ms (<*> ms spent in bootstraps)",
            {slash_ip_port(), num(0, 500), num(0, 10)}, 5},
           {"Removing RDD <*>", {num(0, 99)}, 8},
           {"Starting task <*> in stage <*> (TID <*>, <*>, partition <*>,PROCESS_LOCAL, <*> bytes)",
            {[](std::mt19937_64& rng) { return std::to_string(pick(rng, 0, 31)) + ".0"; },
             [](std::mt19937_64& rng) { return std::to_string(pick(rng, 0, 3)) + ".0"; },
             num(0, 500), ip(), num(0, 31), num(3000, 9000)}, 6},
           {"Connecting to master spark://<*>", {host_port()}, 5},
           {"Connecting to driver: spark://<*>", {host_port()}, 5},
           {"Started daemon with process name: <*>",
            {[h = host()](std::mt19937_64& rng) { return digits(rng, 4) + "@" + h(rng); }}, 4},
           {"Successfully started service '<*>' on port <*>.",
            {choice({"sparkDriver", "sparkExecutor", "HTTP file server", "org.apache.spark.network.netty.NettyBlockTransferService"}),
             num(1024, 65535)}, 5},
           {"Successfully registered with driver", {}, 3},
           {"Executor updated: <*> is now RUNNING",
            {[](std::mt19937_64& rng) {
               return "app-" + digits(rng, 14) + "-" + digits(rng, 4) + "/" +
                      std::to_string(pick(rng, 0, 31));
             }}, 4},
           {"Added <*> in memory on <*> (size: <*>, free: <*>)",
            {spark_block, ip_port(), size_with_unit(), size_with_unit()}, 6},
           {"Added <*> on disk on <*> (size: <*>)", {spark_block, ip_port(), size_with_unit()},
            4},
           {"Asked to send map output locations for shuffle <*> to <*>",
            {num(0, 9), ip_port()}, 5},
           {"Size of output statuses for shuffle <*> is <*> bytes",
            {num(0, 9), num(100, 99999)}, 4},
           {"Don't have map outputs for shuffle <*>, fetching them", {num(0, 9)}, 4},
           {"Updating epoch to <*> and clearing cache", {num(1, 99)}, 3},
           {"Created local directory at <*>", {path()}, 4},
           {"MemoryStore started with capacity <*>", {size_with_unit()}, 4},
           {"ensureFreeSpace(<*>) called with curMem=<*>, maxMem=<*>",
            {num(1000, 9999999), num(0, 99999999), num(100000000, 999999999)}, 7},
           {"Registered executor NettyRpcEndpointRef(null) (<*>) with ID <*>",
            {ip_port(), num(0, 9)}, 6},
           {"Getting <*> non-empty blocks out of <*> blocks", {num(0, 99), num(1, 999)}, 4},
           {"Started <*> remote fetches in <*> ms", {num(0, 99), num(1, 9999)}, 4},
           {"Found block <*> locally", {spark_block}, 3},
           {"Told master about block <*>", {spark_block}, 6},
           {"Putting block <*> took <*> ms", {spark_block, num(5, 900)}, 6},
           {"Started reading broadcast variable <*>", {num(0, 9)}, 7},
           {"Reading broadcast variable <*> took <*> ms", {num(0, 9), num(5, 900)}, 7},
       }});

  const Filler zk_snapshot = [](std::mt19937_64& rng) {
    return "/data/zookeeper/version-2/snapshot." + fill::hex_digits(rng, 8);
  };
  sources.push_back(
      {"ZooKeeper",
       {
           {"Accepted socket connection from <*>", {slash_ip_port()}, 10},
           {"Client attempting to establish new session at <*>", {slash_ip_port()}, 8},
           {"Established session <*> with negotiated timeout <*> for client <*>",
            {hex_id(12), num(2000, 60000), slash_ip_port()}, 8},
           {"Closed socket connection for client <*> which had sessionid <*>",
            {slash_ip_port(), hex_id(12)}, 8},
           {"Expiring session <*>, timeout of <*>ms exceeded", {hex_id(12), num(2000, 60000)},
            6},
           {"Received connection request <*>", {slash_ip_port()}, 5},
           {"Revalidating client: <*>", {hex_id(12)}, 4},
           {"caught end of stream exception", {}, 5},
           {"My election bind port: <*>", {slash_ip_port()}, 14},
           {"Opening socket connection to server <*>. Will not attempt to authenticate using SASL (unknown error)",
            {ip_port()}, 10},
           {"Processed session termination for sessionid: <*>", {hex_id(12)}, 5},
           {"Snapshotting: <*> to <*>", {hex_id(8), zk_snapshot}, 4},
           {"Reading snapshot <*>", {zk_snapshot}, 4},
           {"New election. My id = <*>, proposed zxid=<*>", {num(1, 5), hex_id(8)}, 5},
           {"Notification: <*> (n.leader), <*> (n.zxid), <*> (n.round), LOOKING (my state)",
            {num(1, 5), hex_id(8), num(1, 99)}, 4},
           {"Connection broken for id <*>, my id = <*>", {num(1, 5), num(1, 5)}, 4},
           {"Interrupting SendWorker", {}, 3},
           {"Exception causing close of session <*> due to java.io.IOException: ZooKeeperServer not running",
            {hex_id(12)}, 4},
           {"Client attempting to renew session <*> at <*>", {hex_id(12), slash_ip_port()}, 5},
           {"Invalid session <*> for client <*>, probably expired",
            {hex_id(12), slash_ip_port()}, 4},
           {"Session establishment complete on server <*>, sessionid = <*>, negotiated timeout = <*>",
            {slash_ip_port(), hex_id(12), num(2000, 60000)}, 5},
           {"Got user-level KeeperException when processing sessionid:<*> type:create cxid:<*>",
            {hex_id(12), hex_id(3)}, 3},
           {"shutdown of request processor complete", {}, 3},
           {"Connection request from old client <*>; will be dropped if server is in r-o mode",
            {slash_ip_port()}, 4},
           {"Refusing session request for client <*> as it has seen zxid <*> our last zxid is <*> client must try another server",
            {slash_ip_port(), hex_id(8), hex_id(8)}, 6},
       }});

  const Filler os_url = [](std::mt19937_64& rng) {
    return "/v2/" + fill::hex_digits(rng, 32) + "/servers/detail";
  };
  sources.push_back(
      {"OpenStack",
       {
           {"<*> \"GET <*> HTTP/1.1\" status: <*> len: <*> time: <*>",
            {ip(), os_url, num(200, 504), num(200, 5000), fnum(7)}, 8},
           {"<*> \"POST <*> HTTP/1.1\" status: <*> len: <*> time: <*>",
            {ip(), os_url, num(200, 504), num(200, 5000), fnum(7)}, 6},
           {"[instance: <*>] VM Started (Lifecycle Event)", {uuid()}, 6},
           {"[instance: <*>] VM Paused (Lifecycle Event)", {uuid()}, 5},
           {"[instance: <*>] VM Resumed (Lifecycle Event)", {uuid()}, 4},
           {"[instance: <*>] Took <*> seconds to build instance.", {uuid(), fnum(2)}, 5},
           {"[instance: <*>] Terminating instance", {uuid()}, 6},
           {"[instance: <*>] Instance destroyed successfully.", {uuid()}, 5},
           {"[instance: <*>] Creating image", {uuid()}, 4},
           {"[instance: <*>] During sync_power_state the instance has a pending task (spawning). Skip.",
            {uuid()}, 4},
           {"[instance: <*>] Total memory: <*> MB, used: <*> MB",
            {uuid(), num(2048, 65536), fnum(2)}, 4},
           {"[instance: <*>] Attempting claim: memory <*> MB, disk <*> GB, vcpus <*> CPU",
            {uuid(), num(512, 8192), num(10, 200), num(1, 8)}, 4},
           {"[instance: <*>] Claim successful", {uuid()}, 3},
           {"image <*> at (<*>): checking", {uuid(), path()}, 4},
           {"image <*> at (<*>): in use: on this node <*> local, <*> on other nodes sharing this instance storage",
            {uuid(), path(), num(1, 9), num(0, 9)}, 4},
           {"Active base files: <*>", {path()}, 4},
           {"Removable base files: <*>", {path()}, 3},
           {"Base or swap file too young to remove: <*>", {path()}, 3},
           {"Final resource view: name=<*> phys_ram=<*>MB used_ram=<*>MB phys_disk=<*>GB used_disk=<*>GB total_vcpus=<*> used_vcpus=<*>",
            {host(), num(16384, 262144), num(512, 65536), num(100, 4000), num(10, 400),
             num(1, 64), num(0, 64)}, 4},
           {"Auditing locally available compute resources for node <*>", {host()}, 3},
           {"Took <*> seconds to destroy the instance on the hypervisor.", {fnum(2)}, 4},
           {"Deletion of <*> complete", {path()}, 3},
           {"Instance shutdown successfully after <*> seconds.", {num(0, 9)}, 3},
           {"Bad response code while validating token: <*>", {num(300, 503)}, 3},
       }});

  sources.push_back(
      {"BGL",
       {
           {"generating core.<*>", {num(1, 65536)}, 8},
           {"instruction cache parity error corrected", {}, 8},
           {"data TLB error interrupt", {}, 7},
           {"ciod: Error loading <*>: invalid or missing program image, errno <*>",
            {path(), num(1, 122)}, 6},
           {"<*> double-hummer alignment exceptions", {num(1, 99999)}, 6},
           {"ciod: generated <*> core files for program <*>", {num(1, 2048), path()}, 5},
           {"<*> ddr error(s) detected and corrected on rank <*>, symbol <*>, bit <*>",
            {num(1, 512), num(0, 7), num(0, 9), num(0, 9)}, 5},
           {"machine check interrupt (bit=<*>): L3 major internal error", {hex_id(2)}, 4},
           {"CE sym <*>, at <*>, mask <*>", {num(0, 9), hex_id(8), hex_id(2)}, 8},
           {"total of <*> ddr error(s) detected and corrected", {num(1, 9999)}, 5},
           {"<*> L3 EDRAM error(s) (dcr <*>) detected and corrected", {num(1, 999), hex_id(4)},
            4},
           {"MidplaneSwitchController performing bit sparing on <*> bit <*>",
            {[](std::mt19937_64& rng) {
               return "R" + digits(rng, 2) + "-M" + std::to_string(pick(rng, 0, 1)) + "-N" +
                      std::to_string(pick(rng, 0, 15)) + "-U" + digits(rng, 2);
             },
             num(0, 143)}, 4},
           {"program interrupt: fp cr field <*>", {num(0, 9)}, 3},
           {"ciod: LOGIN chdir(<*>) failed: No such file or directory", {path()}, 5},
           {"ciod: cpu <*> at treeaddr <*> sent unrecognized message <*>",
            {num(0, 3), num(0, 999), hex_id(2)}, 6},
           {"ciod: Message code <*> is not <*> or <*>",
            {num(0, 4), num(7, 51), choice({"4294967295", "2147483647"})}, 5},
           {"ciod: Error loading <*>: program image too big, <*> > <*>",
            {path(), num(100000000, 999999999), num(100000000, 999999999)}, 3},
           {"ciod: duplicate canonical rank <*> to <*>", {num(0, 9), num(0, 9)}, 3},
           {"L3 ecc control register: <*>", {hex_id(8)}, 3},
           {"rts: kernel terminated for reason <*>", {num(1001, 1013)}, 4},
           {"rts panic! - stopping execution", {}, 4},
           {"NodeCard is not fully functional", {}, 3},
           {"critical input interrupt (unit=<*> bit=<*>): warning for torus y+ wire",
            {hex_id(2), hex_id(2)}, 3},
           {"idoproxydb hit ASSERT condition: ASSERT expression=<*> Source file=<*> Source line=<*>",
            {choice({"!rc", "me->state==ST_OPEN", "qel!=NULL"}),
             choice({"idotransportmgr.cpp", "idodatamgr.cpp"}), num(100, 9999)}, 2},
       }});

  sources.push_back(
      {"HPC",
       {
           {"Fan speeds ( <*> <*> <*> <*> <*> <*> )",
            {num(2000, 4000), num(2000, 4000), num(2000, 4000), num(2000, 4000),
             num(2000, 4000), num(2000, 4000)}, 8},
           {"PSU status ( <*> <*> )",
            {choice({"on", "off", "failed", "ok"}), choice({"on", "off", "failed", "ok"})}, 6},
           {"Temperature ( <*> ) exceeds warning threshold", {num(40, 99)}, 6},
           {"Node node<*> status changed to <*>", {num(1, 1024), state}, 6},
           {"Node node<*> marked idle after <*> seconds", {num(1, 1024), num(1, 86400)}, 4},
           {"Link error on broadcast tree interface <*>", {num(0, 64)}, 5},
           {"boot (command <*>) Error: connection lost", {hex_id(4)}, 5},
           {"Component State Change: Component \"<*>\" is in the unavailable state (HWID=<*>)",
            {choice({"alt0", "nic0", "cpu0", "mem1"}), num(100, 9999)}, 6},
           {"inconsistent nodesets node-<*> <*> vs domain <*> <*>",
            {num(0, 255), hex_id(8), num(0, 9), hex_id(8)}, 3},
           {"psu failure, ambient=<*>", {num(20, 60)}, 4},
           {"Interface <*> fault detected, going to reset", {num(0, 8)}, 8},
           {"node-<*> unavailable due to network timeout", {num(0, 255)}, 4},
           {"detected over-temperature condition, shutting down", {}, 3},
           {"halt (command <*>)", {hex_id(4)}, 3},
           {"configured nodeset node-<*> through node-<*>", {num(0, 127), num(128, 255)}, 3},
           {"risBoot: cannot open console device", {}, 2},
       }});

  sources.push_back(
      {"Thunderbird",
       {
           {"session opened for user <*> by (uid=<*>)", {user(), num(0, 65534)}, 8},
           {"session closed for user <*>", {user()}, 6},
           {"Failed password for <*> from <*> port <*> ssh2", {user(), ip(), num(1024, 65535)},
            6},
           {"<*> kernel: imklog <*>, log source = <*> started.", {host(), fnum(2), path()}, 4},
           {"pcied_mon: pcied start succeeded", {}, 4},
           {"DHCPDISCOVER from <*> via eth<*>", {mac(), num(0, 3)}, 5},
           {"Accepted publickey for <*> from <*> port <*> ssh2", {user(), ip(), num(1024, 65535)},
            5},
           {"Did not receive identification string from <*>", {ip()}, 4},
           {"(root) CMD (run-parts /etc/cron.hourly)", {}, 4},
           {"ntpd[<*>]: synchronized to <*>, stratum <*>", {num(1000, 32000), ip(), num(1, 9)},
            5},
           {"ntpd[<*>]: kernel time sync enabled <*>",
            {num(1000, 32000), [](std::mt19937_64& rng) { return "0" + digits(rng, 3); }}, 3},
           {"xinetd[<*>]: START: auth pid=<*> from=<*>",
            {num(1000, 32000), num(1000, 32000), ip()}, 4},
           {"xinetd[<*>]: EXIT: auth status=<*> pid=<*> duration=<*>(sec)",
            {num(1000, 32000), num(0, 9), num(1000, 32000), num(0, 99)}, 4},
           {"kernel: EDAC k8 MC<*>: general bus error: participating processor(local node response), time-out(no timeout) memory transaction type(generic read), mem or i/o(mem access), cache level(generic)",
            {num(0, 3)}, 3},
           {"kernel: VFS: Mounted root (ext3 filesystem).", {}, 3},
           {"dhcpd: DHCPREQUEST for <*> from <*> via eth<*>", {ip(), mac(), num(0, 3)}, 5},
           {"dhcpd: DHCPACK on <*> to <*> via eth<*>", {ip(), mac(), num(0, 3)}, 4},
           {"dhcpd: DHCPOFFER on <*> to <*> via eth<*>", {ip(), mac(), num(0, 3)}, 4},
           {"postfix/smtpd[<*>]: connect from unknown[<*>]", {num(1000, 32000), ip()}, 4},
           {"crond[<*>]: (root) CMD (<*>)", {num(1000, 32000), path()}, 4},
           {"in.tftpd[<*>]: RRQ from <*> filename <*>", {num(1000, 32000), ip(), path()}, 4},
           {"gmetad[<*>]: data_thread() got no answer from any [<*>] datasource",
            {num(1000, 32000), choice({"thunderbird", "cluster-a", "cluster-b"})}, 3},
           {"Address <*> maps to <*>, but this does not map back to the address - POSSIBLE BREAK-IN ATTEMPT!",
            {ip(), host()}, 4},
           {"automount[<*>]: expired <*>", {num(1000, 32000), path()}, 3},
       }});

  sources.push_back(
      {"Windows",
       {
           {"CBS Loaded Servicing Stack v<*> with Core: <*>", {version4(), path()}, 6},
           {"Warning: Unrecognized packageExtended attribute.", {}, 6},
           {"Service <*> state change to <*>",
            {choice({"wuauserv", "bits", "trustedinstaller", "msiserver", "sppsvc"}), state},
            7},
           {"Read out cached package applicability for package: <*>, ApplicabilityState: <*>",
            {[](std::mt19937_64& rng) {
               return "Package_" + std::to_string(pick(rng, 1, 99)) + "_for_KB" +
                      digits(rng, 7);
             },
             num(1, 112)}, 6},
           {"Session: <*> initialized by client <*>.",
            {[](std::mt19937_64& rng) { return digits(rng, 8) + "_" + digits(rng, 10); },
             choice({"WindowsUpdateAgent", "DISM", "TrustedInstaller"})}, 5},
           {"Loading offline registry hive: <*>, from path '<*>'.",
            {choice({"SOFTWARE", "SYSTEM", "COMPONENTS"}), path()}, 4},
           {"Progress: UI message updated. Operation type: <*>. Stage: <*> out of <*>. Percent progress: <*>.",
            {choice({"Update", "Install", "Repair"}), num(1, 9), num(1, 9), num(0, 100)}, 5},
           {"SQM: Initializing online with Windows opt-in: False", {}, 4},
           {"SQM: Cleaning up report files older than <*> days.", {num(1, 30)}, 4},
           {"SQM: Requesting upload of all unsent reports.", {}, 3},
           {"SQM: Failed to start upload with file pattern: <*> flags: <*>",
            {[](std::mt19937_64& rng) {
               return "C:\\Windows\\ServiceProfiles\\NetworkService\\AppData\\sqm" +
                      digits(rng, 3) + ".sqm";
             },
             hex_id(1)}, 3},
           {"Failed to internally open package. [HRESULT = <*> - CBS_E_INVALID_PACKAGE]",
            {hex_id(8)}, 4},
           {"Universal Time is: <*>", {iso_timestamp()}, 4},
           {"CSI perf trace: CSIPERF:TXCOMMIT;<*>", {num(10000, 999999)}, 3},
           {"Ending TrustedInstaller initialization.", {}, 3},
           {"Starting TrustedInstaller finalization.", {}, 3},
           {"Ending TrustedInstaller finalization.", {}, 2},
           {"Scavenge: Starting ordinary cleanup of owners.", {}, 2},
           {"Setting ExecuteState key to: <*>",
            {choice({"CbsExecuteStateNone", "CbsExecuteStatePlanned",
                     "CbsExecuteStateResolvePending"})}, 3},
       }});

  sources.push_back(
      {"Linux",
       {
           {"session opened for user <*> by (uid=<*>)", {user(), num(0, 65534)}, 8},
           {"Received disconnect from <*>: <*>: Bye Bye", {ip(), num(2, 14)}, 6},
           {"authentication failure; logname= uid=<*> euid=<*> tty=NODEVssh ruser= rhost=<*>",
            {num(0, 65534), num(0, 65534), host()}, 6},
           {"usb <*>: new high speed USB device using ehci_hcd and address <*>",
            {[](std::mt19937_64& rng) {
               return std::to_string(pick(rng, 1, 8)) + "-" + std::to_string(pick(rng, 1, 4));
             },
             num(2, 127)}, 4},
           {"klogd <*>, log source = <*> started.", {fnum(2), path()}, 4},
           {"Link is up at <*> Mbps, <*> duplex", {num(10, 1000), choice({"full", "half"})}, 4},
           {"CPU <*>: Machine check events logged", {num(0, 7)}, 4},
           {"authentication failure; logname= uid=<*> euid=<*> tty=NODEVssh ruser= rhost=<*> user=<*>",
            {num(0, 65534), num(0, 65534), host(), user()}, 5},
           {"connection from <*> ()", {ip()}, 4},
           {"refused connect from <*>", {ip()}, 6},
           {"FTP session closed", {}, 3},
           {"Did not receive identification string from <*>", {ip()}, 4},
           {"Could not reverse map address <*>.", {ip()}, 3},
           {"check pass; user unknown", {}, 3},
           {"NET: Registered protocol family <*>", {num(1, 31)}, 5},
           {"TCP: Hash tables configured (established <*> bind <*>)",
            {num(10000, 999999), num(10000, 99999)}, 5},
           {"<*> at I/O <*> (irq = <*>) is a 16550A",
            {choice({"ttyS0", "ttyS1"}), choice({"0x3f8", "0x2f8"}), num(3, 9)}, 5},
           {"audit(<*>): initialized",
            {[](std::mt19937_64& rng) {
               return digits(rng, 10) + "." + digits(rng, 3) + ":" +
                      std::to_string(pick(rng, 1, 99));
             }}, 4},
           {"hda: <*>, ATA DISK drive",
            {choice({"ST3120026A", "WDC WD1600JB-00GVA0", "Maxtor 6Y080L0"})}, 3},
           {"EXT3-fs: mounted filesystem with ordered data mode.", {}, 3},
           {"martian source <*> from <*>, on dev eth<*>", {ip(), ip(), num(0, 3)}, 7},
           {"ll header: <*>",
            {[](std::mt19937_64& rng) {
               std::string out;
               for (int i = 0; i < 14; ++i) {
                 if (i) out += ':';
                 out += hex_digits(rng, 2);
               }
               return out;
             }}, 4},
           {"Installing knfsd (copyright (C) 1996 okir@monad.swb.de).", {}, 2},
           {"eth<*>: Setting <*>-duplex based on auto-negotiated partner ability <*>.",
            {num(0, 3), choice({"full", "half"}), hex_id(4)}, 3},
           {"dhclient: DHCPREQUEST on eth<*> to <*> port <*>",
            {num(0, 3),
             [](std::mt19937_64& rng) {
               return pick(rng, 0, 1) ? std::string("255.255.255.255") : ip_value(rng);
             },
             num(67, 68)}, 4},
       }});

  sources.push_back(
      {"Mac",
       {
           {"ARPT: <*>: wl0: setRATE: <*> mbps", {fnum(6), num(6, 866)}, 6},
           {"Sandbox: <*>(<*>) deny(<*>) mach-lookup <*>",
            {choice({"QuickLookSatelli", "mdworker", "cloudd", "nsurlsessiond"}),
             num(100, 99999), num(1, 2),
             [](std::mt19937_64& rng) {
               static const std::vector<std::string> kSvc = {"updater", "locationd",
                                                             "diagnosticd", "metricsd", "syncd"};
               return "com.apple." + kSvc[pick(rng, 0, 4)];
             }}, 6},
           {"Bluetooth state changed to <*>", {state}, 6},
           {"hibernate image path: <*>", {path()}, 4},
           {"IOThunderboltSwitch<*>: port <*> link state changed to <*>",
            {num(0, 3), num(1, 12), state}, 5},
           {"Audio device paused during sleep", {}, 3},
           {"WindowServer: display <*> captured by client <*>", {num(0, 3), num(100, 9999)}, 4},
           {"Sandbox: violation of type <*> for process <*>", {num(1, 9), num(100, 99999)}, 7},
           {"AppleCamIn::systemWakeCall - messageType = <*>", {hex_id(8)}, 4},
           {"AppleThunderboltNHIType2::waitForOk2Go2Sx - retries = <*>", {num(0, 9)}, 4},
           {"WindowServer: CGXDisplayDidWakeNotification [<*>]: posting kCGSDisplayDidWake",
            {[](std::mt19937_64& rng) { return digits(rng, 13); }}, 4},
           {"RTC: Maintenance <*>, sleep <*>",
            {[t = time_of_day()](std::mt19937_64& rng) {
               return std::to_string(pick(rng, 2015, 2017)) + "/" +
                      std::to_string(pick(rng, 1, 12)) + "/" + std::to_string(pick(rng, 1, 28)) +
                      " " + t(rng);
             },
             num(0, 9)}, 4},
           {"kernel: en0: BSSID changed to <*>", {mac()}, 5},
           {"kernel: PM response took <*> ms (<*>, powerd)", {num(1, 2000), num(100, 99999)}, 4},
           {"mDNSResponder: mDNS_DeregisterInterface: Frequent transitions for interface en0 (<*>)",
            {ip()}, 4},
           {"loginwindow: Failed sending message to screen sharing GetScreensharingPort, err: <*>",
            {num(1, 99)}, 3},
           {"symptomsd: unexpected switch value <*>", {num(0, 9)}, 3},
           {"Previous shutdown cause: <*>", {choice({"5", "3", "0", "-60", "-62", "-128"})}, 5},
           {"en0: channel changed to <*>", {num(1, 161)}, 4},
           {"Saved crash report for <*>[<*>] version <*> to <*>",
            {choice({"WindowServer", "Safari", "mdworker", "cloudd"}), num(100, 99999),
             [](std::mt19937_64& rng) {
               return digits(rng, 2) + "." + digits(rng, 1) + "." + digits(rng, 1);
             },
             path()}, 3},
           {"airportd: _doAutoJoin: Already associated to <*>. Bailing on auto-join.",
            {choice({"HomeNet", "CorpWiFi", "CafeGuest"})}, 3},
           {"configd: network changed: v4(en0:<*>) DNS Proxy", {ip()}, 3},
           {"Failed to bootstrap path: path = <*>, error = No such process", {path()}, 3},
           {"AppleCamIn::handleWakeEvent_gated", {}, 2},
       }});

  // Android state words appear on both sides: as "to <*>" parameters and as
  // plain literals ("paused by", "stopped at", ...). The Display pair only
  // differs two tokens away from the ambiguous slot, so window radius k >= 2
  // is needed there.
  const Filler pkg = [](std::mt19937_64& rng) {
    static const std::vector<std::string> kApp = {"mail", "maps", "chat", "store", "player"};
    return "com.app." + kApp[fill::pick(rng, 0, 4)];
  };
  sources.push_back(
      {"Android",
       {
           {"ActivityManager: setState to <*>", {state}, 10},
           {"ConnectivityService: network status changed to <*>", {state}, 9},
           {"AudioService: stream <*> paused by user <*>", {num(0, 9), num(10000, 19999)}, 6},
           {"MediaSession: playback stopped at position <*>", {num(0, 1 << 22)}, 6},
           {"BatteryStats: wakelock active for <*> ms", {num(1, 600000)}, 6},
           {"Display <*>: state change <*> applied now",
            {num(0, 9), choice({"idle", "busy", "off"})}, 6},
           {"Display driver: state change idle applied late", {}, 6},
           {"PackageManager: package <*> installed for user <*>", {pkg, num(0, 12)}, 6},
           {"WindowManager: input event <*> dispatched in <*> ms",
            {num(1, 1 << 20), num(1, 500)}, 6},
           {"GC_CONCURRENT freed <*>, <*> free <*>, paused <*>",
            {[](std::mt19937_64& rng) { return digits(rng, 4) + "K"; },
             [](std::mt19937_64& rng) { return std::to_string(pick(rng, 1, 99)) + "%"; },
             [](std::mt19937_64& rng) { return digits(rng, 4) + "K/" + digits(rng, 4) + "K"; },
             [](std::mt19937_64& rng) {
               return std::to_string(pick(rng, 1, 40)) + "ms+" +
                      std::to_string(pick(rng, 1, 9)) + "ms";
             }}, 7},
           {"ActivityManager: Start proc <*>:<*> for broadcast <*>",
            {num(1000, 32000), pkg,
             [pkg](std::mt19937_64& rng) {
               static const std::vector<std::string> kRecv = {"/.BootReceiver", "/.PushService",
                                                              "/.SyncAdapter"};
               return pkg(rng) + kRecv[fill::pick(rng, 0, 2)];
             }}, 6},
           {"ActivityManager: Killing <*>:<*> (adj <*>): empty #<*>",
            {num(1000, 32000), pkg, num(0, 15), num(1, 99)}, 5},
           {"libc: Fatal signal <*> (SIGSEGV), code <*>, fault addr <*> in tid <*>",
            {num(4, 11), num(0, 2), hex_id(8), num(1000, 32000)}, 4},
           {"art: GC freed <*> objects, <*> free, paused <*>us",
            {num(1000, 999999), pct(), num(100, 9999)}, 4},
           {"Choreographer: Skipped <*> frames! The application may be doing too much work on its main thread.",
            {num(4, 300)}, 6},
           {"BatteryService: level:<*> status:<*> voltage:<*> temperature:<*>",
            {num(1, 100), num(1, 5), num(3500, 4400), num(200, 450)}, 4},
           {"SurfaceFlinger: id=<*> createSurf (<*>) flag=<*>",
            {num(0, 99),
             [](std::mt19937_64& rng) { return digits(rng, 3) + "x" + digits(rng, 3); },
             hex_id(4)}, 3},
           {"AlarmManager: Checking for alarms... rtc=<*>",
            {[](std::mt19937_64& rng) { return digits(rng, 13); }}, 3},
           {"Watchdog: !@Sync <*>", {num(1, 9999)}, 3},
           {"DownloadManager: Download <*> starting", {num(1, 9999)}, 4},
           {"Zygote: Process <*> exited due to signal (<*>)", {num(1000, 32000), num(4, 15)}, 4},
           {"PowerManagerService: Waking up from sleep (uid=<*> reason=<*>)",
            {num(1000, 10000), choice({"android.policy:POWER", "android.policy:LID"})}, 3},
           {"KeyguardUpdateMonitor: received broadcast android.intent.action.BATTERY_CHANGED",
            {}, 3},
           {"wpa_supplicant: wlan0: CTRL-EVENT-SCAN-STARTED", {}, 2},
           {"installd: Running dexopt on: <*>", {pkg}, 3},
       }});

  sources.push_back(
      {"HealthApp",
       {
           {"Step_LSC: onStandStepChanged <*>", {num(1, 99999)}, 8},
           {"Step_SPUtils: getTodayTotalDetailSteps = <*>", {num(1, 99999)}, 7},
           {"HiH_HiHealthDataSdk: state changed to <*>", {state}, 7},
           {"Heartbeat: sync period = <*> ms", {num(1000, 600000)}, 4},
           {"Track_PersistManager: flush data size <*>", {num(1, 65536)}, 4},
           {"Screen stopped recording steps", {}, 3},
           {"REPORT : <*> <*> <*> <*>",
            {num(1000, 99999), num(100, 9999), num(1, 999), num(1, 99999)}, 4},
           {"Step_LSC: onExtend:<*> <*> <*> <*>",
            {[](std::mt19937_64& rng) { return digits(rng, 13); }, num(0, 99), num(0, 99),
             num(0, 9)}, 5},
           {"Step_SPUtils: setTodayTotalDetailSteps=<*>",
            {[](std::mt19937_64& rng) {
               return digits(rng, 13) + "|" + std::to_string(pick(rng, 0, 99999)) +
                      "|0|0.0|0.0|0.0";
             }}, 5},
           {"Step_StandReportReceiver: onReceive action:<*>",
            {choice({"android.intent.action.SCREEN_ON", "android.intent.action.SCREEN_OFF",
                     "android.intent.action.USER_PRESENT"})}, 4},
           {"Step_ExtSDM: calculateAltitudeWithCache totalAltitude=<*>", {num(0, 9999)}, 4},
           {"HiH_HiHealthDataSdk: begin to bind apk service", {}, 3},
           {"HiH_HiHealthDataSdk: bind service success", {}, 3},
           {"HiSyncUtil: bloodpressure data size:<*>", {num(0, 999)}, 3},
           {"PluginOperation: checkUpdate over, versionCode:<*>", {num(100, 99999)}, 3},
           {"DataCache: refresh data list size=<*>", {num(0, 999)}, 3},
       }});

  sources.push_back(
      {"Apache",
       {
           {"jk2_init() Found child <*> in scoreboard slot <*>", {num(100, 99999), num(0, 64)},
            10},
           {"workerEnv.init() ok <*>", {path()}, 8},
           {"mod_jk child workerEnv in error state <*>", {num(1, 9)}, 7},
           {"[client <*>] Directory index forbidden by rule: <*>", {ip(), path()}, 7},
           {"mod_security: Access denied with code <*>", {num(400, 503)}, 4},
           {"jk2_init() Can't find child <*> in scoreboard", {num(100, 99999)}, 6},
           {"mod_jk child init <*> <*>", {num(0, 3), num(-2, 0)}, 5},
           {"[error] [client <*>] File does not exist: <*>", {ip(), path()}, 6},
       }});

  sources.push_back(
      {"OpenSSH",
       {
           {"Failed password for invalid user <*> from <*> port <*> ssh2",
            {user(), ip(), num(1024, 65535)}, 8},
           {"Accepted password for <*> from <*> port <*> ssh2",
            {user(), ip(), num(1024, 65535)}, 6},
           {"Connection closed by <*> [preauth]", {ip()}, 7},
           {"Received disconnect from <*>: <*>: Bye Bye [preauth]", {ip(), num(2, 14)}, 6},
           {"PAM <*> more authentication failures; logname= uid=<*> euid=<*> tty=ssh ruser= rhost=<*>",
            {num(1, 5), num(0, 65534), num(0, 65534), host()}, 4},
           {"Invalid user <*> from <*>", {user(), ip()}, 5},
           {"pam_unix(sshd:auth): authentication failure; logname= uid=<*> euid=<*> tty=ssh ruser= rhost=<*> user=<*>",
            {num(0, 65534), num(0, 65534), host(), user()}, 5},
           {"pam_unix(sshd:session): session closed for user <*>", {user()}, 4},
           {"Disconnecting: Too many authentication failures for <*> [preauth]", {user()}, 5},
           {"error: maximum authentication attempts exceeded for <*> from <*> port <*> ssh2 [preauth]",
            {user(), ip(), num(1024, 65535)}, 4},
           {"error: Received disconnect from <*>: <*>: <*> [preauth]",
            {ip(), num(3, 14),
             choice({"com.jcraft.jsch.JSchException: Auth fail",
                     "No more user authentication methods available.",
                     "Normal Shutdown, Thank you for playing"})}, 4},
           {"input_userauth_request: invalid user <*> [preauth]", {user()}, 4},
           {"reverse mapping checking getaddrinfo for <*> [<*>] failed - POSSIBLE BREAK-IN ATTEMPT!",
            {host(), ip()}, 4},
           {"Received signal <*>; terminating.", {num(1, 15)}, 4},
           {"Server listening on <*> port <*>.",
            {[](std::mt19937_64& rng) {
               return pick(rng, 0, 1) ? std::string("0.0.0.0") : ip_value(rng);
             },
             num(22, 2222)}, 4},
           {"error: Bind to port <*> on <*> failed: Address already in use.",
            {num(22, 2222),
             [](std::mt19937_64& rng) {
               return pick(rng, 0, 1) ? std::string("0.0.0.0") : ip_value(rng);
             }}, 4},
           {"Connection from <*> port <*> on <*> port <*>",
            {ip(), num(1024, 65535), ip(), num(22, 2222)}, 4},
           {"fatal: Read from socket failed: Connection reset by peer [preauth]", {}, 3},
           {"Exiting on signal <*>", {num(1, 15)}, 3},
           {"Postponed keyboard-interactive for <*> from <*> port <*> ssh2 [preauth]",
            {user(), ip(), num(1024, 65535)}, 3},
       }});

  const Filler proc = choice({"chrome.exe", "firefox.exe", "svchost.exe", "Dropbox.exe",
                              "OUTLOOK.EXE", "netsession_win.exe", "Skype.exe", "explorer.exe"});
  sources.push_back(
      {"Proxifier",
       {
           {"<*> - <*>:<*> open through proxy <*>:<*> HTTPS",
            {proc, host(), num(80, 65535), host(), num(1080, 9090)}, 12},
           {"<*> - <*>:<*> open directly", {proc, host(), num(80, 65535)}, 8},
           {"<*> - <*>:<*> close, <*> bytes sent, <*> bytes received, lifetime <*>",
            {proc, host(), num(80, 65535), num(100, 1 << 24), num(100, 1 << 24), mmss()}, 12},
           {"<*> - <*>:<*> error : Could not connect through proxy <*>:<*> - connection refused",
            {proc, host(), num(80, 65535), host(), num(1080, 9090)}, 6},
       }});

  return sources;
}

// Stable per-source seed derived from one master seed.
inline std::uint64_t source_seed(std::uint64_t master, std::size_t index) {
  return master ^ (0x9E3779B97F4A7C15ULL * (index + 1));
}

inline std::vector<SyntheticRow> toy_corpus(int n, std::uint64_t seed) {
  return make_rows(toy_patterns(), n, seed);
}

// Short messages for throughput runs: content only, no labels needed.
inline std::vector<std::string> throughput_lines(int n, std::uint64_t seed) {
  using namespace fill;
  const std::vector<PatternSpec> patterns = {
      {"Verification succeeded for <*>", {block_id()}, 3},
      {"Accepted socket connection from <*>", {slash_ip_port()}, 3},
      {"Got assigned task <*>", {num(0, 9999)}, 2},
      {"session opened for user <*> by (uid=<*>)", {user(), num(0, 65534)}, 2},
      {"instruction cache parity error corrected", {}, 1},
  };
  std::vector<SyntheticRow> rows = make_rows(patterns, n, seed);
  std::vector<std::string> lines;
  lines.reserve(rows.size());
  for (SyntheticRow& r : rows) lines.push_back(std::move(r.content));
  return lines;
}

// Builds a labeled dataset straight from generated rows, mirroring what
// load_dataset does after reading a CSV. Generator output must always align.
inline LabeledDataset dataset_from_rows(const std::string& source_name,
                                        const std::vector<SyntheticRow>& rows) {
  LabeledDataset dataset;
  dataset.source_name = source_name;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    LabeledMessage rec;
    rec.line_id = static_cast<int>(i) + 1;
    rec.message = tokenize(rows[i].content);
    rec.truth_template = rows[i].truth_template;
    rec.labels = derive_token_labels(rec.message, rec.truth_template);
    dataset.records.push_back(std::move(rec));
  }
  build_groups(dataset);
  return dataset;
}

namespace detail {

inline std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    out += c;
    if (c == '"') out += '"';
  }
  out += '"';
  return out;
}

}  // namespace detail

// loghub structured-CSV schema: LineId, Content, EventId, EventTemplate.
// EventIds are assigned per distinct template in order of first appearance.
inline void write_structured_csv(const std::filesystem::path& file,
                                 const std::vector<SyntheticRow>& rows) {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw DataError("cannot open file for writing: " + file.string());
  out << "LineId,Content,EventId,EventTemplate\n";
  std::map<std::string, int> event_ids;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    auto [it, inserted] =
        event_ids.try_emplace(rows[i].truth_template, static_cast<int>(event_ids.size()) + 1);
    out << (i + 1) << ',' << detail::csv_escape(rows[i].content) << ",E" << it->second << ','
        << detail::csv_escape(rows[i].truth_template) << '\n';
  }
  if (!out) throw DataError("failed writing " + file.string());
}

// One subdirectory per source holding the structured CSV plus the raw lines:
//   <root>/<name>/<name>_2k.log_structured.csv
//   <root>/<name>/<name>_2k.log
inline void write_benchmark_corpus(const std::filesystem::path& root, int rows_per_source,
                                   std::uint64_t seed) {
  const std::vector<SourceSpec> sources = benchmark_sources();
  for (std::size_t i = 0; i < sources.size(); ++i) {
    const std::filesystem::path dir = root / sources[i].name;
    std::filesystem::create_directories(dir);
    const std::vector<SyntheticRow> rows =
        make_rows(sources[i].patterns, rows_per_source, source_seed(seed, i));
    write_structured_csv(dir / (sources[i].name + "_2k.log_structured.csv"), rows);
    std::ofstream raw(dir / (sources[i].name + "_2k.log"), std::ios::binary);
    if (!raw) throw DataError("cannot open raw log for writing under " + dir.string());
    for (const SyntheticRow& r : rows) raw << r.content << '\n';
  }
}

}  // namespace uniparser
