#ifndef FSNET_FSNET_HPP
#define FSNET_FSNET_HPP

#include <fsnet/analysis.hpp>
#include <fsnet/and_feature.hpp>
#include <fsnet/connection_cache.hpp>
#include <fsnet/dataset.hpp>
#include <fsnet/error.hpp>
#include <fsnet/graph_export.hpp>
#include <fsnet/lga.hpp>
#include <fsnet/network.hpp>
#include <fsnet/objectives.hpp>
#include <fsnet/operators.hpp>
#include <fsnet/parallel.hpp>
#include <fsnet/random.hpp>
#include <fsnet/report.hpp>
#include <fsnet/spea2.hpp>

#endif // FSNET_FSNET_HPP
