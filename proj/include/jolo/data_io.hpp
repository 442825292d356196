#pragma once

#include <string>
#include <vector>

#include "jolo/censoring.hpp"

namespace jolo {

// Two raw lifetime samples, e.g. the bundled bladder-cancer remission times.
struct Dataset {
    std::vector<double> x;
    std::vector<double> y;
    std::string label;
};

// Dataset CSV layout:
//   # m=<int> n=<int>
//   sample,value
//   X,6.94
//   Y,0.08
//   ...
Dataset ingest(const std::string& path);
std::string dataset_to_csv(const Dataset& d);
void write_dataset(const Dataset& d, const std::string& path);

// Pools both samples, sorts, truncates at rank r with origin indicators —
// the deterministic analogue of the simulation generator for real data.
CensoredSample apply_joint_censoring(const Dataset& d, int r);

// CensoredSample CSV layout:
//   # m=<int> n=<int> r=<int>
//   index,w,nu
//   1,0.08,0
//   ...
CensoredSample read_censored_csv(const std::string& path);
std::string censored_to_csv(const CensoredSample& s);
void write_censored_csv(const CensoredSample& s, const std::string& path);

void write_text_file(const std::string& path, const std::string& content);

} // namespace jolo
