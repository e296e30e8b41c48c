#include "rrbeam/scenario.hpp"

namespace rrbeam {

namespace {

// Four sources: SoI at 90 degrees, three interferers 20 dB above it.
#define RRBEAM_TABLE1_SOURCES \
    "\n"                      \
    "[source]\n"              \
    "doa_degrees = 90\n"      \
    "power_db = 10\n"         \
    "is_soi = true\n"         \
    "\n"                      \
    "[source]\n"              \
    "doa_degrees = 35\n"      \
    "power_db = 20\n"         \
    "is_soi = false\n"        \
    "\n"                      \
    "[source]\n"              \
    "doa_degrees = 135\n"     \
    "power_db = 20\n"         \
    "is_soi = false\n"        \
    "\n"                      \
    "[source]\n"              \
    "doa_degrees = 165\n"     \
    "power_db = 20\n"         \
    "is_soi = false\n"

constexpr std::string_view kTable1M64 =
    "# 64-sensor half-wavelength ULA, up to 2 degrees of presumed-DoA error.\n"
    "num_sensors = 64\n"
    "spacing_ratio = 0.5\n"
    "snr_db = 10\n"
    "mismatch_max_degrees = 2\n"
    "rank = 2\n"
    "snapshots = 120\n"
    "runs = 100\n"
    "epsilon = 140\n"
    "algorithms = mvdr-smi, mvdr-sg, mvdr-rls, krylov-rls, rcb-krylov-rls, mvdr-mjio-sg, "
    "mvdr-mjio-rls, rcb-mjio-sg, rcb-mjio-rls\n" RRBEAM_TABLE1_SOURCES;

constexpr std::string_view kTable1M64NoMismatch =
    "# 64-sensor half-wavelength ULA, exact presumed DoA.\n"
    "num_sensors = 64\n"
    "spacing_ratio = 0.5\n"
    "snr_db = 10\n"
    "mismatch_max_degrees = 0\n"
    "rank = 2\n"
    "snapshots = 120\n"
    "runs = 100\n"
    "epsilon = 140\n"
    "algorithms = mvdr-smi, mvdr-sg, mvdr-rls, krylov-rls, rcb-krylov-rls, mvdr-mjio-sg, "
    "mvdr-mjio-rls, rcb-mjio-sg, rcb-mjio-rls\n" RRBEAM_TABLE1_SOURCES;

constexpr std::string_view kTable1M320 =
    "# 320-sensor half-wavelength ULA, up to 2 degrees of presumed-DoA error.\n"
    "num_sensors = 320\n"
    "spacing_ratio = 0.5\n"
    "snr_db = 10\n"
    "mismatch_max_degrees = 2\n"
    "rank = 2\n"
    "snapshots = 120\n"
    "runs = 100\n"
    "epsilon = 800\n"
    "algorithms = mvdr-rls, krylov-rls, rcb-krylov-rls, mvdr-mjio-rls, rcb-mjio-rls\n"
    RRBEAM_TABLE1_SOURCES;

#undef RRBEAM_TABLE1_SOURCES

}  // namespace

const std::vector<BundledScenario>& bundled_scenarios() {
    static const std::vector<BundledScenario> list = {
        {"table1_m64", "M=64, 2 degree mismatch, epsilon=140", kTable1M64},
        {"table1_m64_nomismatch", "M=64, no mismatch", kTable1M64NoMismatch},
        {"table1_m320", "M=320, 2 degree mismatch, epsilon=800", kTable1M320},
    };
    return list;
}

}  // namespace rrbeam
