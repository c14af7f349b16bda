#pragma once

#include <stdexcept>
#include <string>

namespace pegsim {

enum class errc {
    // parsing / arithmetic
    malformed,
    negative_amount,
    too_many_decimals,
    division_by_zero,
    overflow,
    zero_amount,
    // discounting / classification
    index_out_of_range,
    empty_run,
    // rebase
    zero_target,
    supply_underflow,
    // seigniorage
    insufficient_stable,
    zero_share_price,
    insufficient_shares,
    not_below_peg,
    insufficient_cash,
    not_above_peg,
    // amm
    empty_pool,
    excessive_output,
    // engine / scenario
    replay_exhausted,
    config_invalid,
    // data
    malformed_csv,
    non_monotonic_timestamps,
    gap_too_large,
    empty_series,
    coin_not_found,
    remote_error,
    rate_limited,
    io_error,
    schema_mismatch,
};

const char* errc_name(errc c);

class SimError : public std::runtime_error {
  public:
    SimError(errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code)
    {
    }

    errc code() const noexcept { return code_; }

    // Errors caused by bad input data or configuration map to CLI exit code 2;
    // everything else is an internal failure (exit code 3).
    bool is_data_error() const noexcept;

  private:
    errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& what)
{
    throw SimError(code, what);
}

} // namespace pegsim
