#pragma once

#include <string>

#include "hitstat/chain.hpp"
#include "hitstat/hitting.hpp"
#include "hitstat/spectral.hpp"

namespace hitstat {

/// "%.17g" rendering; every double in a report or chain file goes through
/// this so reruns are byte-identical.
std::string fmt17(double v);

/// Chain interchange JSON:
/// {"n": int, "states": [str], "rows": [[[j, p], ...], ...],
///  "metadata": {str: str}}
std::string chain_to_json(const ChainSpec& chain);
ChainSpec chain_from_json(const std::string& text);

ChainSpec load_chain(const std::string& path);
void save_chain(const ChainSpec& chain, const std::string& path);

/// Pmf CSV: header t,p,tail_flag; one row per t, then a final tail row
/// flagged 1 whose t column is horizon + 1.
std::string pmf_to_csv(const HittingPmf& pmf);
std::string surprise_to_csv(const SurprisePmf& pmf);
std::string pmf_to_json(const HittingPmf& pmf);
std::string surprise_to_json(const SurprisePmf& pmf);

std::string moments_to_json(const MomentEstimate& est);
std::string spectrum_to_json(const KilledSpectrum& spectrum);

void write_file(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

}  // namespace hitstat
