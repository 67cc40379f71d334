// SPDX-License-Identifier: MIT
// RAII handles and status checking for the C interface.
#pragma once

#include "coauction/coauction.h"

#include <memory>
#include <stdexcept>
#include <string>

namespace cli {

class ApiError : public std::runtime_error {
public:
    ApiError(coa_status status, const std::string& what) : std::runtime_error(what), status_(status) {}
    coa_status status() const noexcept { return status_; }

private:
    coa_status status_;
};

inline void check(coa_status status) {
    if (status != COA_OK) throw ApiError(status, std::string(coa_status_name(status)) + ": " + coa_last_error());
}

struct DistDeleter {
    void operator()(coa_dist* d) const noexcept { coa_dist_destroy(d); }
};
struct MarketDeleter {
    void operator()(coa_market* m) const noexcept { coa_market_destroy(m); }
};
struct AuctionDeleter {
    void operator()(coa_auction* a) const noexcept { coa_auction_destroy(a); }
};
using DistHandle = std::unique_ptr<coa_dist, DistDeleter>;
using MarketHandle = std::unique_ptr<coa_market, MarketDeleter>;
using AuctionHandle = std::unique_ptr<coa_auction, AuctionDeleter>;

} // namespace cli
