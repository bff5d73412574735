#pragma once

// Type erasure for generic point functions.
//
// A PointFunction holds one std::function per scalar type in Ts, all built
// from the same generic callable, so a metric written once as
//   [](const auto& x) { ... }
// can be evaluated in plain doubles or in any supported dual nesting.

#include <functional>
#include <memory>
#include <tuple>
#include <type_traits>
#include <utility>

#include "framekin/tensor.hpp"

namespace framekin {

template <template <class> class Out, class... Ts>
class PointFunction {
 public:
  template <class T>
  using Signature = Out<T>(const Vec4<T>&);

  PointFunction() = default;

  template <class F>
    requires(!std::is_same_v<std::decay_t<F>, PointFunction> &&
             (std::is_invocable_r_v<Out<Ts>, const F&, const Vec4<Ts>&> && ...))
  explicit PointFunction(F f)
      : fns_(std::make_shared<const Storage>(std::function<Signature<Ts>>(f)...)) {}

  explicit operator bool() const { return static_cast<bool>(fns_); }

  template <class T>
  Out<T> operator()(const Vec4<T>& x) const {
    return std::get<std::function<Signature<T>>>(*fns_)(x);
  }

 private:
  using Storage = std::tuple<std::function<Signature<Ts>>...>;
  std::shared_ptr<const Storage> fns_;
};

template <class T>
using VecOf = Vec4<T>;
template <class T>
using MatOf = Mat4<T>;

}  // namespace framekin
