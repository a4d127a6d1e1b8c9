#pragma once

#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "signet/dataset.hpp"
#include "signet/signed_graph.hpp"
#include "signet/trainer.hpp"

namespace signet {

using Json = nlohmann::ordered_json;

constexpr const char* kArtifactName = "signet";
constexpr const char* kArtifactVersion = "0.1.0";

inline std::uint64_t fnv1a64(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

inline std::string read_file_bytes(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline std::string file_hash_hex(const std::string& path) {
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(fnv1a64(read_file_bytes(path))));
    return buf;
}

inline Json file_entry(const std::string& path) {
    return Json{{"path", path}, {"fnv1a64", file_hash_hex(path)}};
}

inline void write_json(const Json& j, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    out << j.dump(2) << "\n";
}

inline Json read_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    return Json::parse(in);
}

// --- feature scaler -----------------------------------------------------------

inline void save_scaler(const FeatureScaler& scaler, const std::string& path) {
    write_json(Json{{"mean", scaler.mean}, {"sd", scaler.sd}}, path);
}

inline FeatureScaler load_scaler(const std::string& path) {
    Json j = read_json(path);
    FeatureScaler scaler;
    scaler.mean = j.at("mean").get<Vec>();
    scaler.sd = j.at("sd").get<Vec>();
    if (scaler.mean.size() != scaler.sd.size())
        throw std::runtime_error("malformed scaler file: " + path);
    return scaler;
}

// --- training report ------------------------------------------------------------

/// One row per evaluation point. Optional test metrics serialize as empty
/// fields; wall-clock time is deliberately not part of this file so reruns are
/// byte-identical.
inline void save_report_csv(const TrainReport& report, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    out << "epoch,classification_loss,graph_loss,total_loss,train_accuracy,"
           "test_accuracy,test_auc\n";
    for (const ReportRow& row : report.rows) {
        out << row.epoch << "," << format_double(row.losses.classification) << ","
            << format_double(row.losses.graph) << "," << format_double(row.losses.total)
            << "," << format_double(row.train_accuracy) << ",";
        if (row.test_accuracy) out << format_double(*row.test_accuracy);
        out << ",";
        if (row.test_auc) out << format_double(*row.test_auc);
        out << "\n";
    }
}

inline Json report_summary(const TrainReport& report) {
    Json j;
    if (!report.rows.empty()) {
        const ReportRow& last = report.rows.back();
        j["final_epoch"] = last.epoch;
        j["classification_loss"] = last.losses.classification;
        j["graph_loss"] = last.losses.graph;
        j["total_loss"] = last.losses.total;
        j["train_accuracy"] = last.train_accuracy;
        j["test_accuracy"] = last.test_accuracy ? Json(*last.test_accuracy) : Json();
        j["test_auc"] = last.test_auc ? Json(*last.test_auc) : Json();
    }
    return j;
}

}  // namespace signet
