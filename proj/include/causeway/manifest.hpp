#pragma once

#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "causeway/detail/text.hpp"
#include "causeway/error.hpp"

namespace causeway {

inline std::string digest_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open file for digest: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return detail::hex64(detail::fnv1a(buf.str()));
}

// Everything needed to reproduce a run bit-exactly: the resolved
// configuration, the seeds, and digests of all inputs.
struct Manifest {
    std::string command;
    nlohmann::ordered_json config = nlohmann::ordered_json::object();
    std::map<std::string, std::string> input_digests;
    std::vector<std::uint64_t> seeds;
    std::vector<std::string> outputs;

    void add_input(const std::string& path) { input_digests[path] = digest_file(path); }

    std::string config_hash() const {
        std::string material = config.dump();
        for (const auto& [path, digest] : input_digests) material += path + "=" + digest + ";";
        return detail::hex64(detail::fnv1a(material));
    }

    nlohmann::ordered_json to_json() const {
        nlohmann::ordered_json j;
        j["command"] = command;
        j["configHash"] = config_hash();
        j["config"] = config;
        j["inputs"] = input_digests;
        j["seeds"] = seeds;
        j["outputs"] = outputs;
        return j;
    }

    void write(const std::string& path) const {
        std::ofstream out(path);
        if (!out) throw ValidationError("cannot write manifest: " + path);
        out << to_json().dump(2) << "\n";
    }
};

}  // namespace causeway
