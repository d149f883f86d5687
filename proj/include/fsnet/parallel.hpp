#ifndef FSNET_PARALLEL_HPP
#define FSNET_PARALLEL_HPP

#include <algorithm>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace fsnet
{

// Runs fn(i) for i in [0, n) on up to `threads` workers using static contiguous
// chunks. fn must only touch state owned by index i; results are therefore
// independent of the worker count. The first exception thrown is rethrown.
template <typename F> auto parallel_for(std::size_t n, std::size_t threads, F&& fn) -> void
{
  threads = std::max<std::size_t>(1, std::min(threads, n));
  if (threads == 1)
  {
    for (std::size_t i = 0; i < n; ++i)
      fn(i);
    return;
  }

  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> workers;
  workers.reserve(threads);

  const auto chunk = (n + threads - 1) / threads;
  for (std::size_t t = 0; t < threads; ++t)
  {
    const auto first = t * chunk;
    const auto last = std::min(n, first + chunk);
    if (first >= last)
      break;
    workers.emplace_back([&, first, last] {
      try
      {
        for (auto i = first; i < last; ++i)
          fn(i);
      }
      catch (...)
      {
        const auto lock = std::scoped_lock{error_mutex};
        if (!error)
          error = std::current_exception();
      }
    });
  }
  for (auto& w : workers)
    w.join();
  if (error)
    std::rethrow_exception(error);
}

} // namespace fsnet

#endif // FSNET_PARALLEL_HPP
