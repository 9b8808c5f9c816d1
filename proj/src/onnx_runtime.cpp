#include "textmark/onnx_runtime.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <functional>
#include <limits>
#include <numeric>
#include <optional>
#include <sstream>
#include <unordered_map>

#include "onnx-ml.pb.h"
#include "textmark/error.hpp"
#include "textmark/utf8.hpp"

namespace textmark::onnx {

using Shape = std::vector<int64_t>;

std::string dtype_name(DType t) {
  switch (t) {
    case DType::Float: return "float";
    case DType::Int64: return "int64";
    case DType::String: return "string";
    case DType::Bool: return "bool";
  }
  return "?";
}

namespace {

std::size_t numel(const Shape& s) {
  std::size_t n = 1;
  for (auto d : s) n *= static_cast<std::size_t>(d);
  return n;
}

[[noreturn]] void fail(const std::string& msg) { throw Error(ErrorCode::MalformedModel, msg); }

}  // namespace

std::size_t Tensor::size() const { return numel(shape); }

Tensor Tensor::floats(std::vector<int64_t> shape, std::vector<float> v) {
  Tensor t;
  t.type = DType::Float, t.shape = std::move(shape), t.f = std::move(v);
  return t;
}
Tensor Tensor::ints(std::vector<int64_t> shape, std::vector<int64_t> v) {
  Tensor t;
  t.type = DType::Int64, t.shape = std::move(shape), t.i = std::move(v);
  return t;
}
Tensor Tensor::strings(std::vector<int64_t> shape, std::vector<std::string> v) {
  Tensor t;
  t.type = DType::String, t.shape = std::move(shape), t.s = std::move(v);
  return t;
}
Tensor Tensor::bools(std::vector<int64_t> shape, std::vector<uint8_t> v) {
  Tensor t;
  t.type = DType::Bool, t.shape = std::move(shape), t.b = std::move(v);
  return t;
}

namespace {

// ---------------------------------------------------------------- conversion from protobuf

std::optional<DType> dtype_from_proto(int t) {
  switch (t) {
    case ::onnx::TensorProto::FLOAT:
    case ::onnx::TensorProto::DOUBLE: return DType::Float;
    case ::onnx::TensorProto::INT64:
    case ::onnx::TensorProto::INT32: return DType::Int64;
    case ::onnx::TensorProto::STRING: return DType::String;
    case ::onnx::TensorProto::BOOL: return DType::Bool;
    default: return std::nullopt;
  }
}

template <class T>
std::vector<T> raw_as(const std::string& raw, std::size_t n) {
  if (raw.size() != n * sizeof(T)) fail("raw_data size mismatch");
  std::vector<T> v(n);
  if (n) std::memcpy(v.data(), raw.data(), raw.size());
  return v;
}

Tensor from_proto(const ::onnx::TensorProto& p) {
  if (p.data_location() == ::onnx::TensorProto::EXTERNAL) fail("external tensor data is not supported: " + p.name());
  auto type = dtype_from_proto(p.data_type());
  if (!type) fail("unsupported tensor element type " + std::to_string(p.data_type()) + " for " + p.name());
  Tensor t;
  t.type = *type;
  t.shape.assign(p.dims().begin(), p.dims().end());
  const std::size_t n = numel(t.shape);
  const bool raw = p.has_raw_data();
  switch (p.data_type()) {
    case ::onnx::TensorProto::FLOAT:
      t.f = raw ? raw_as<float>(p.raw_data(), n) : std::vector<float>(p.float_data().begin(), p.float_data().end());
      break;
    case ::onnx::TensorProto::DOUBLE: {
      auto d = raw ? raw_as<double>(p.raw_data(), n)
                   : std::vector<double>(p.double_data().begin(), p.double_data().end());
      t.f.assign(d.begin(), d.end());
      break;
    }
    case ::onnx::TensorProto::INT64:
      t.i = raw ? raw_as<int64_t>(p.raw_data(), n)
                : std::vector<int64_t>(p.int64_data().begin(), p.int64_data().end());
      break;
    case ::onnx::TensorProto::INT32: {
      auto d = raw ? raw_as<int32_t>(p.raw_data(), n)
                   : std::vector<int32_t>(p.int32_data().begin(), p.int32_data().end());
      t.i.assign(d.begin(), d.end());
      break;
    }
    case ::onnx::TensorProto::BOOL:
      if (raw) {
        t.b = raw_as<uint8_t>(p.raw_data(), n);
      } else {
        t.b.assign(p.int32_data().begin(), p.int32_data().end());
      }
      break;
    case ::onnx::TensorProto::STRING: t.s.assign(p.string_data().begin(), p.string_data().end()); break;
  }
  if (t.size() != n || std::max({t.f.size(), t.i.size(), t.s.size(), t.b.size()}) != n) {
    fail("tensor " + p.name() + " has wrong element count");
  }
  return t;
}

ValueInfo value_info(const ::onnx::ValueInfoProto& v) {
  ValueInfo vi;
  vi.name = v.name();
  if (!v.type().has_tensor_type()) throw Error(ErrorCode::UnsupportedModelSignature, "non-tensor value " + v.name());
  auto type = dtype_from_proto(v.type().tensor_type().elem_type());
  if (!type) throw Error(ErrorCode::UnsupportedModelSignature, "unsupported element type for " + v.name());
  vi.type = *type;
  if (v.type().tensor_type().has_shape()) {
    vi.has_shape = true;
    for (const auto& d : v.type().tensor_type().shape().dim())
      vi.dims.push_back(d.has_dim_value() ? d.dim_value() : -1);
  }
  return vi;
}

struct Attr {
  int type = 0;
  float f = 0;
  int64_t i = 0;
  std::string s;
  std::vector<float> floats;
  std::vector<int64_t> ints;
  std::vector<std::string> strings;
  std::optional<Tensor> t;
};

struct Node {
  std::string op;
  std::string domain;
  std::string name;
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;
  std::unordered_map<std::string, Attr> attrs;

  const Attr* attr(const std::string& k) const {
    auto it = attrs.find(k);
    return it == attrs.end() ? nullptr : &it->second;
  }
  int64_t i(const std::string& k, int64_t def) const {
    auto a = attr(k);
    return a ? a->i : def;
  }
  float f(const std::string& k, float def) const {
    auto a = attr(k);
    return a ? a->f : def;
  }
  std::string s(const std::string& k, const std::string& def) const {
    auto a = attr(k);
    return a ? a->s : def;
  }
};

Node node_from_proto(const ::onnx::NodeProto& p) {
  Node n;
  n.op = p.op_type();
  n.domain = p.domain() == "ai.onnx" ? "" : p.domain();
  n.name = p.name();
  n.inputs.assign(p.input().begin(), p.input().end());
  n.outputs.assign(p.output().begin(), p.output().end());
  for (const auto& a : p.attribute()) {
    Attr at;
    at.type = a.type();
    at.f = a.f();
    at.i = a.i();
    at.s = a.s();
    at.floats.assign(a.floats().begin(), a.floats().end());
    at.ints.assign(a.ints().begin(), a.ints().end());
    at.strings.assign(a.strings().begin(), a.strings().end());
    if (a.has_t()) at.t = from_proto(a.t());
    if (a.type() == ::onnx::AttributeProto::GRAPH || a.type() == ::onnx::AttributeProto::GRAPHS) {
      throw Error(ErrorCode::UnsupportedModelSignature, "subgraph attribute on " + n.op);
    }
    n.attrs.emplace(a.name(), std::move(at));
  }
  return n;
}

// ---------------------------------------------------------------- helpers

int64_t norm_axis(int64_t axis, std::size_t rank) {
  int64_t r = static_cast<int64_t>(rank);
  if (axis < -r || axis >= std::max<int64_t>(r, 1)) fail("axis " + std::to_string(axis) + " out of range");
  return axis < 0 ? axis + r : axis;
}

Shape broadcast_shape(const Shape& a, const Shape& b) {
  std::size_t r = std::max(a.size(), b.size());
  Shape out(r);
  for (std::size_t k = 0; k < r; ++k) {
    int64_t da = k < r - a.size() ? 1 : a[k - (r - a.size())];
    int64_t db = k < r - b.size() ? 1 : b[k - (r - b.size())];
    if (da != db && da != 1 && db != 1) fail("shapes are not broadcastable");
    out[k] = da == 1 ? db : da;
  }
  return out;
}

// Maps each output element to the flat offset in an input broadcast to `out`.
std::vector<std::size_t> broadcast_index(const Shape& in, const Shape& out) {
  const std::size_t r = out.size();
  std::vector<std::size_t> strides(r, 0);
  std::size_t s = 1;
  for (std::size_t k = in.size(); k-- > 0;) {
    std::size_t ok = k + (r - in.size());
    strides[ok] = in[k] == 1 ? 0 : s;
    s *= static_cast<std::size_t>(in[k]);
  }
  std::vector<std::size_t> idx(numel(out));
  for (std::size_t n = 0; n < idx.size(); ++n) {
    std::size_t rem = n, off = 0;
    for (std::size_t k = r; k-- > 0;) {
      off += (rem % static_cast<std::size_t>(out[k])) * strides[k];
      rem /= static_cast<std::size_t>(out[k]);
    }
    idx[n] = off;
  }
  return idx;
}

Tensor empty_like_type(DType type, Shape shape) {
  Tensor t;
  t.type = type;
  t.shape = std::move(shape);
  std::size_t n = numel(t.shape);
  switch (type) {
    case DType::Float: t.f.resize(n); break;
    case DType::Int64: t.i.resize(n); break;
    case DType::String: t.s.resize(n); break;
    case DType::Bool: t.b.resize(n); break;
  }
  return t;
}

// Copies element `from` of src into element `to` of dst (same type).
void copy_elem(const Tensor& src, std::size_t from, Tensor& dst, std::size_t to) {
  switch (src.type) {
    case DType::Float: dst.f[to] = src.f[from]; break;
    case DType::Int64: dst.i[to] = src.i[from]; break;
    case DType::String: dst.s[to] = src.s[from]; break;
    case DType::Bool: dst.b[to] = src.b[from]; break;
  }
}

std::vector<int64_t> as_ints(const Tensor& t) {
  if (t.type == DType::Int64) return t.i;
  if (t.type == DType::Float) return std::vector<int64_t>(t.f.begin(), t.f.end());
  fail("expected an integer tensor");
}

Tensor gather_by_index(const Tensor& src, const Shape& out_shape, const std::vector<std::size_t>& idx) {
  Tensor out = empty_like_type(src.type, out_shape);
  for (std::size_t n = 0; n < idx.size(); ++n) copy_elem(src, idx[n], out, n);
  return out;
}

Tensor transpose(const Tensor& x, const std::vector<int64_t>& perm) {
  const std::size_t r = x.shape.size();
  Shape out_shape(r);
  for (std::size_t k = 0; k < r; ++k) out_shape[k] = x.shape[perm[k]];
  std::vector<std::size_t> in_strides(r, 1);
  for (std::size_t k = r; k-- > 1;) in_strides[k - 1] = in_strides[k] * x.shape[k];
  std::vector<std::size_t> idx(numel(out_shape));
  std::vector<int64_t> coord(r, 0);
  for (std::size_t n = 0; n < idx.size(); ++n) {
    std::size_t off = 0;
    for (std::size_t k = 0; k < r; ++k) off += coord[k] * in_strides[perm[k]];
    idx[n] = off;
    for (std::size_t k = r; k-- > 0;) {
      if (++coord[k] < out_shape[k]) break;
      coord[k] = 0;
    }
  }
  return gather_by_index(x, out_shape, idx);
}

struct Ctx {
  const Node& node;
  std::function<const Tensor*(const std::string&)> lookup;
  std::vector<Tensor> out;
  int64_t opset;

  bool has(std::size_t k) const { return k < node.inputs.size() && !node.inputs[k].empty(); }
  const Tensor& in(std::size_t k) const {
    if (!has(k)) fail(node.op + " is missing input " + std::to_string(k));
    auto t = lookup(node.inputs[k]);
    if (!t) fail(node.op + " input '" + node.inputs[k] + "' is undefined");
    return *t;
  }
  void emit(Tensor t) { out.push_back(std::move(t)); }
};

// ---------------------------------------------------------------- elementwise

template <class F>
Tensor binary_numeric(const Tensor& a, const Tensor& b, F f) {
  if (a.type != b.type) fail("binary op on mismatched types");
  Shape shape = broadcast_shape(a.shape, b.shape);
  auto ia = broadcast_index(a.shape, shape);
  auto ib = broadcast_index(b.shape, shape);
  Tensor out = empty_like_type(a.type, shape);
  if (a.type == DType::Float) {
    for (std::size_t n = 0; n < ia.size(); ++n) out.f[n] = static_cast<float>(f(double(a.f[ia[n]]), double(b.f[ib[n]])));
  } else if (a.type == DType::Int64) {
    for (std::size_t n = 0; n < ia.size(); ++n) out.i[n] = static_cast<int64_t>(f(a.i[ia[n]], b.i[ib[n]]));
  } else {
    fail("numeric op on non-numeric tensor");
  }
  return out;
}

template <class F>
Tensor compare(const Tensor& a, const Tensor& b, F f) {
  if (a.type != b.type) fail("comparison on mismatched types");
  Shape shape = broadcast_shape(a.shape, b.shape);
  auto ia = broadcast_index(a.shape, shape);
  auto ib = broadcast_index(b.shape, shape);
  Tensor out = empty_like_type(DType::Bool, shape);
  for (std::size_t n = 0; n < ia.size(); ++n) {
    switch (a.type) {
      case DType::Float: out.b[n] = f(a.f[ia[n]], b.f[ib[n]]); break;
      case DType::Int64: out.b[n] = f(a.i[ia[n]], b.i[ib[n]]); break;
      case DType::String: out.b[n] = f(a.s[ia[n]], b.s[ib[n]]); break;
      case DType::Bool: out.b[n] = f(a.b[ia[n]], b.b[ib[n]]); break;
    }
  }
  return out;
}

template <class F>
Tensor unary_float(const Tensor& x, F f) {
  if (x.type != DType::Float) fail("expected a float tensor");
  Tensor out = x;
  for (auto& v : out.f) v = static_cast<float>(f(static_cast<double>(v)));
  return out;
}

// ---------------------------------------------------------------- linear algebra

Tensor matmul(const Tensor& a0, const Tensor& b0) {
  if (a0.type != DType::Float || b0.type != DType::Float) fail("MatMul expects float tensors");
  Tensor a = a0, b = b0;
  bool squeeze_a = false, squeeze_b = false;
  if (a.shape.size() == 1) a.shape.insert(a.shape.begin(), 1), squeeze_a = true;
  if (b.shape.size() == 1) b.shape.push_back(1), squeeze_b = true;
  const int64_t M = a.shape[a.shape.size() - 2], K = a.shape.back();
  const int64_t K2 = b.shape[b.shape.size() - 2], N = b.shape.back();
  if (K != K2) fail("MatMul inner dimensions differ");
  Shape ba(a.shape.begin(), a.shape.end() - 2), bb(b.shape.begin(), b.shape.end() - 2);
  Shape batch = broadcast_shape(ba, bb);
  auto ia = broadcast_index(ba, batch);
  auto ib = broadcast_index(bb, batch);
  Shape shape = batch;
  shape.push_back(M);
  shape.push_back(N);
  Tensor out = empty_like_type(DType::Float, shape);
  for (std::size_t p = 0; p < ia.size(); ++p) {
    const float* A = a.f.data() + ia[p] * M * K;
    const float* B = b.f.data() + ib[p] * K * N;
    float* C = out.f.data() + p * M * N;
    for (int64_t m = 0; m < M; ++m)
      for (int64_t n = 0; n < N; ++n) {
        double acc = 0;
        for (int64_t k = 0; k < K; ++k) acc += double(A[m * K + k]) * B[k * N + n];
        C[m * N + n] = static_cast<float>(acc);
      }
  }
  if (squeeze_b) out.shape.pop_back();
  if (squeeze_a) out.shape.erase(out.shape.end() - (squeeze_b ? 1 : 2));
  return out;
}

Tensor gemm(const Ctx& c) {
  const Tensor& A = c.in(0);
  const Tensor& B = c.in(1);
  if (A.shape.size() != 2 || B.shape.size() != 2) fail("Gemm expects 2-D inputs");
  const bool ta = c.node.i("transA", 0), tb = c.node.i("transB", 0);
  const double alpha = c.node.f("alpha", 1.0f), beta = c.node.f("beta", 1.0f);
  const int64_t M = ta ? A.shape[1] : A.shape[0], K = ta ? A.shape[0] : A.shape[1];
  const int64_t K2 = tb ? B.shape[1] : B.shape[0], N = tb ? B.shape[0] : B.shape[1];
  if (K != K2) fail("Gemm inner dimensions differ");
  Tensor out = empty_like_type(DType::Float, {M, N});
  std::vector<std::size_t> ic;
  if (c.has(2)) ic = broadcast_index(c.in(2).shape, out.shape);
  for (int64_t m = 0; m < M; ++m)
    for (int64_t n = 0; n < N; ++n) {
      double acc = 0;
      for (int64_t k = 0; k < K; ++k) {
        double av = ta ? A.f[k * M + m] : A.f[m * K + k];
        double bv = tb ? B.f[n * K + k] : B.f[k * N + n];
        acc += av * bv;
      }
      double v = alpha * acc;
      if (c.has(2)) v += beta * c.in(2).f[ic[m * N + n]];
      out.f[m * N + n] = static_cast<float>(v);
    }
  return out;
}

// ---------------------------------------------------------------- reductions

std::vector<int64_t> reduce_axes(const Ctx& c, std::size_t rank, bool& noop) {
  std::vector<int64_t> axes;
  noop = false;
  if (c.has(1)) {
    axes = as_ints(c.in(1));
  } else if (auto a = c.node.attr("axes")) {
    axes = a->ints;
  }
  if (axes.empty()) {
    if (c.node.i("noop_with_empty_axes", 0)) noop = true;
    axes.resize(rank);
    std::iota(axes.begin(), axes.end(), 0);
  }
  for (auto& ax : axes) ax = norm_axis(ax, rank);
  std::sort(axes.begin(), axes.end());
  axes.erase(std::unique(axes.begin(), axes.end()), axes.end());
  return axes;
}

enum class ReduceKind { Mean, Sum, Max };

Tensor reduce(const Ctx& c, ReduceKind kind) {
  const Tensor& x = c.in(0);
  if (x.type != DType::Float) fail(c.node.op + " expects a float tensor");
  bool noop;
  auto axes = reduce_axes(c, x.shape.size(), noop);
  if (noop) return x;
  const bool keep = c.node.i("keepdims", 1);
  Shape kept = x.shape;
  for (auto ax : axes) kept[ax] = 1;
  std::size_t count = 1;
  for (auto ax : axes) count *= x.shape[ax];
  Tensor out = empty_like_type(DType::Float, kept);
  std::vector<double> acc(out.size(), kind == ReduceKind::Max ? -std::numeric_limits<double>::infinity() : 0.0);
  // map each input element to its reduced slot
  const std::size_t r = x.shape.size();
  std::vector<int64_t> coord(r, 0);
  std::vector<std::size_t> kstride(r, 1);
  for (std::size_t k = r; k-- > 1;) kstride[k - 1] = kstride[k] * kept[k];
  for (std::size_t n = 0; n < x.size(); ++n) {
    std::size_t slot = 0;
    for (std::size_t k = 0; k < r; ++k) slot += (kept[k] == 1 ? 0 : coord[k]) * kstride[k];
    double v = x.f[n];
    acc[slot] = kind == ReduceKind::Max ? std::max(acc[slot], v) : acc[slot] + v;
    for (std::size_t k = r; k-- > 0;) {
      if (++coord[k] < x.shape[k]) break;
      coord[k] = 0;
    }
  }
  for (std::size_t n = 0; n < acc.size(); ++n) {
    double v = acc[n];
    if (kind == ReduceKind::Mean) v = count ? v / count : std::numeric_limits<double>::quiet_NaN();
    out.f[n] = static_cast<float>(v);
  }
  if (!keep) {
    Shape s;
    for (std::size_t k = 0; k < r; ++k)
      if (!std::binary_search(axes.begin(), axes.end(), static_cast<int64_t>(k))) s.push_back(x.shape[k]);
    out.shape = s;
  }
  return out;
}

// ---------------------------------------------------------------- shape ops

Tensor reshape(const Tensor& x, std::vector<int64_t> shape, bool allowzero) {
  int64_t infer = -1;
  std::size_t known = 1;
  for (std::size_t k = 0; k < shape.size(); ++k) {
    if (shape[k] == 0 && !allowzero) {
      if (k >= x.shape.size()) fail("Reshape copies a missing dimension");
      shape[k] = x.shape[k];
    }
    if (shape[k] == -1) {
      if (infer >= 0) fail("Reshape with two inferred dimensions");
      infer = static_cast<int64_t>(k);
    } else {
      known *= static_cast<std::size_t>(shape[k]);
    }
  }
  if (infer >= 0) shape[infer] = known ? static_cast<int64_t>(x.size() / known) : 0;
  if (numel(shape) != x.size()) fail("Reshape changes the element count");
  Tensor out = x;
  out.shape = shape;
  return out;
}

Tensor slice(const Ctx& c) {
  const Tensor& x = c.in(0);
  const std::size_t r = x.shape.size();
  std::vector<int64_t> starts, ends, axes, steps;
  if (c.has(1)) {
    starts = as_ints(c.in(1));
    ends = as_ints(c.in(2));
    if (c.has(3)) axes = as_ints(c.in(3));
    if (c.has(4)) steps = as_ints(c.in(4));
  } else {
    starts = c.node.attr("starts") ? c.node.attr("starts")->ints : std::vector<int64_t>{};
    ends = c.node.attr("ends") ? c.node.attr("ends")->ints : std::vector<int64_t>{};
    if (auto a = c.node.attr("axes")) axes = a->ints;
  }
  if (axes.empty()) {
    axes.resize(starts.size());
    std::iota(axes.begin(), axes.end(), 0);
  }
  if (steps.empty()) steps.assign(starts.size(), 1);
  std::vector<int64_t> st(r, 0), step(r, 1);
  Shape out_shape = x.shape;
  for (std::size_t k = 0; k < starts.size(); ++k) {
    int64_t ax = norm_axis(axes[k], r);
    int64_t dim = x.shape[ax];
    int64_t s = starts[k], e = ends[k], p = steps[k];
    if (p == 0) fail("Slice step of zero");
    if (s < 0) s += dim;
    if (e < 0) e += dim;
    if (p > 0) {
      s = std::clamp<int64_t>(s, 0, dim);
      e = std::clamp<int64_t>(e, 0, dim);
      out_shape[ax] = e > s ? (e - s + p - 1) / p : 0;
    } else {
      s = std::clamp<int64_t>(s, 0, dim - 1);
      e = std::clamp<int64_t>(e, -1, dim - 1);
      out_shape[ax] = s > e ? (s - e - p - 1) / -p : 0;
    }
    st[ax] = s, step[ax] = p;
  }
  std::vector<std::size_t> in_strides(r, 1);
  for (std::size_t k = r; k-- > 1;) in_strides[k - 1] = in_strides[k] * x.shape[k];
  std::vector<std::size_t> idx(numel(out_shape));
  std::vector<int64_t> coord(r, 0);
  for (std::size_t n = 0; n < idx.size(); ++n) {
    std::size_t off = 0;
    for (std::size_t k = 0; k < r; ++k) off += (st[k] + coord[k] * step[k]) * in_strides[k];
    idx[n] = off;
    for (std::size_t k = r; k-- > 0;) {
      if (++coord[k] < out_shape[k]) break;
      coord[k] = 0;
    }
  }
  return gather_by_index(x, out_shape, idx);
}

Tensor gather(const Ctx& c) {
  const Tensor& data = c.in(0);
  const Tensor& indices = c.in(1);
  auto ind = as_ints(indices);
  const std::size_t r = data.shape.size();
  const int64_t axis = norm_axis(c.node.i("axis", 0), r);
  const int64_t dim = data.shape[axis];
  std::size_t outer = 1, inner = 1;
  for (int64_t k = 0; k < axis; ++k) outer *= data.shape[k];
  for (std::size_t k = axis + 1; k < r; ++k) inner *= data.shape[k];
  Shape out_shape(data.shape.begin(), data.shape.begin() + axis);
  out_shape.insert(out_shape.end(), indices.shape.begin(), indices.shape.end());
  out_shape.insert(out_shape.end(), data.shape.begin() + axis + 1, data.shape.end());
  std::vector<std::size_t> idx;
  idx.reserve(numel(out_shape));
  for (std::size_t o = 0; o < outer; ++o)
    for (int64_t j : ind) {
      if (j < -dim || j >= dim) fail("Gather index out of range");
      if (j < 0) j += dim;
      for (std::size_t q = 0; q < inner; ++q) idx.push_back((o * dim + j) * inner + q);
    }
  return gather_by_index(data, out_shape, idx);
}

Tensor concat(const Ctx& c) {
  const Tensor& first = c.in(0);
  const std::size_t r = first.shape.size();
  const int64_t axis = norm_axis(c.node.i("axis", 0), r);
  Shape out_shape = first.shape;
  out_shape[axis] = 0;
  std::vector<const Tensor*> parts;
  for (std::size_t k = 0; k < c.node.inputs.size(); ++k) {
    if (!c.has(k)) continue;
    const Tensor& t = c.in(k);
    if (t.type != first.type || t.shape.size() != r) fail("Concat inputs disagree");
    out_shape[axis] += t.shape[axis];
    parts.push_back(&t);
  }
  std::size_t outer = 1, inner = 1;
  for (int64_t k = 0; k < axis; ++k) outer *= first.shape[k];
  for (std::size_t k = axis + 1; k < r; ++k) inner *= first.shape[k];
  Tensor out = empty_like_type(first.type, out_shape);
  std::size_t pos = 0;
  for (std::size_t o = 0; o < outer; ++o)
    for (auto* t : parts) {
      std::size_t chunk = t->shape[axis] * inner;
      for (std::size_t q = 0; q < chunk; ++q) copy_elem(*t, o * chunk + q, out, pos++);
    }
  return out;
}

Tensor cast(const Tensor& x, int64_t to) {
  auto target = dtype_from_proto(static_cast<int>(to));
  if (!target) fail("Cast to unsupported type " + std::to_string(to));
  if (*target == x.type) return x;
  Tensor out = empty_like_type(*target, x.shape);
  const std::size_t n = x.size();
  auto get = [&](std::size_t k) -> double {
    switch (x.type) {
      case DType::Float: return x.f[k];
      case DType::Int64: return static_cast<double>(x.i[k]);
      case DType::Bool: return x.b[k];
      case DType::String: return std::stod(x.s[k]);
    }
    return 0;
  };
  for (std::size_t k = 0; k < n; ++k) {
    double v = get(k);
    switch (*target) {
      case DType::Float: out.f[k] = static_cast<float>(v); break;
      case DType::Int64: out.i[k] = static_cast<int64_t>(v); break;
      case DType::Bool: out.b[k] = v != 0; break;
      case DType::String: {
        std::ostringstream os;
        os << v;
        out.s[k] = os.str();
        break;
      }
    }
  }
  return out;
}

Tensor softmax(const Ctx& c) {
  const Tensor& x = c.in(0);
  if (x.type != DType::Float) fail("Softmax expects a float tensor");
  const std::size_t r = x.shape.size();
  int64_t axis = norm_axis(c.node.i("axis", c.opset >= 13 ? -1 : 1), r);
  std::size_t outer = 1, len = 1, inner = 1;
  if (c.opset >= 13) {
    for (int64_t k = 0; k < axis; ++k) outer *= x.shape[k];
    len = x.shape[axis];
    for (std::size_t k = axis + 1; k < r; ++k) inner *= x.shape[k];
  } else {
    for (int64_t k = 0; k < axis; ++k) outer *= x.shape[k];
    for (std::size_t k = axis; k < r; ++k) len *= x.shape[k];
  }
  Tensor out = x;
  for (std::size_t o = 0; o < outer; ++o)
    for (std::size_t q = 0; q < inner; ++q) {
      auto at = [&](std::size_t j) -> float& { return out.f[(o * len + j) * inner + q]; };
      double mx = -std::numeric_limits<double>::infinity();
      for (std::size_t j = 0; j < len; ++j) mx = std::max(mx, double(at(j)));
      double sum = 0;
      for (std::size_t j = 0; j < len; ++j) sum += std::exp(double(at(j)) - mx);
      for (std::size_t j = 0; j < len; ++j) at(j) = static_cast<float>(std::exp(double(at(j)) - mx) / sum);
    }
  return out;
}

Tensor layer_norm(const Ctx& c) {
  const Tensor& x = c.in(0);
  const Tensor& scale = c.in(1);
  const std::size_t r = x.shape.size();
  const int64_t axis = norm_axis(c.node.i("axis", -1), r);
  const double eps = c.node.f("epsilon", 1e-5f);
  std::size_t outer = 1, len = 1;
  for (int64_t k = 0; k < axis; ++k) outer *= x.shape[k];
  for (std::size_t k = axis; k < r; ++k) len *= x.shape[k];
  Shape norm_shape(x.shape.begin() + axis, x.shape.end());
  auto is = broadcast_index(scale.shape, norm_shape);
  std::vector<std::size_t> ib;
  if (c.has(2)) ib = broadcast_index(c.in(2).shape, norm_shape);
  Tensor out = x;
  for (std::size_t o = 0; o < outer; ++o) {
    const float* row = x.f.data() + o * len;
    double mean = 0, var = 0;
    for (std::size_t j = 0; j < len; ++j) mean += row[j];
    mean /= len;
    for (std::size_t j = 0; j < len; ++j) var += (row[j] - mean) * (row[j] - mean);
    var /= len;
    double inv = 1.0 / std::sqrt(var + eps);
    for (std::size_t j = 0; j < len; ++j) {
      double v = (row[j] - mean) * inv * scale.f[is[j]];
      if (c.has(2)) v += c.in(2).f[ib[j]];
      out.f[o * len + j] = static_cast<float>(v);
    }
  }
  return out;
}

// ---------------------------------------------------------------- string ops

Tensor string_normalizer(const Ctx& c) {
  const Tensor& x = c.in(0);
  if (x.type != DType::String) fail("StringNormalizer expects strings");
  const bool two_d = x.shape.size() == 2;
  if (!(x.shape.size() == 1 || (two_d && x.shape[0] == 1))) fail("StringNormalizer expects [C] or [1, C]");
  const std::string action = c.node.s("case_change_action", "NONE");
  const bool case_sensitive = c.node.i("is_case_sensitive", 0);
  std::vector<std::string> stop;
  if (auto a = c.node.attr("stopwords")) stop = a->strings;
  auto upper = [](std::string s) {
    for (auto& ch : s)
      if (ch >= 'a' && ch <= 'z') ch = static_cast<char>(ch - 'a' + 'A');
    return s;
  };
  std::vector<std::string> kept;
  for (const auto& s : x.s) {
    bool drop = false;
    for (const auto& w : stop)
      drop |= case_sensitive ? s == w : utf8::ascii_lower(s) == utf8::ascii_lower(w);
    if (drop) continue;
    if (action == "LOWER") {
      kept.push_back(utf8::ascii_lower(s));
    } else if (action == "UPPER") {
      kept.push_back(upper(s));
    } else {
      kept.push_back(s);
    }
  }
  if (kept.empty()) kept.emplace_back();
  int64_t n = static_cast<int64_t>(kept.size());
  return Tensor::strings(two_d ? Shape{1, n} : Shape{n}, std::move(kept));
}

std::vector<std::string> split_string(const std::string& s, const std::string& delim, int64_t maxsplit) {
  std::vector<std::string> parts;
  if (delim.empty()) {
    std::size_t i = 0;
    auto space_at = [&](std::size_t k) { return utf8::is_space(utf8::decode(s, k).cp); };
    while (i < s.size()) {
      while (i < s.size() && space_at(i)) i += utf8::decode(s, i).size;
      if (i >= s.size()) break;
      if (maxsplit >= 0 && static_cast<int64_t>(parts.size()) == maxsplit) {
        std::size_t e = s.size();
        while (e > i) {
          std::size_t b = e - 1;
          while (b > i && (static_cast<unsigned char>(s[b]) & 0xC0) == 0x80) --b;
          if (!space_at(b)) break;
          e = b;
        }
        parts.push_back(s.substr(i, e - i));
        break;
      }
      std::size_t j = i;
      while (j < s.size() && !space_at(j)) j += utf8::decode(s, j).size;
      parts.push_back(s.substr(i, j - i));
      i = j;
    }
    return parts;
  }
  std::size_t start = 0;
  while (true) {
    std::size_t pos = s.find(delim, start);
    if (pos == std::string::npos || (maxsplit >= 0 && static_cast<int64_t>(parts.size()) == maxsplit)) {
      parts.push_back(s.substr(start));
      break;
    }
    parts.push_back(s.substr(start, pos - start));
    start = pos + delim.size();
  }
  return parts;
}

void string_split(Ctx& c) {
  const Tensor& x = c.in(0);
  if (x.type != DType::String) fail("StringSplit expects strings");
  const std::string delim = c.node.s("delimiter", "");
  const int64_t maxsplit = c.node.attr("maxsplit") ? c.node.i("maxsplit", -1) : -1;
  std::vector<std::vector<std::string>> parts;
  std::size_t width = 0;
  for (const auto& s : x.s) {
    parts.push_back(split_string(s, delim, maxsplit));
    width = std::max(width, parts.back().size());
  }
  Shape ys = x.shape;
  ys.push_back(static_cast<int64_t>(width));
  Tensor y = empty_like_type(DType::String, ys);
  Tensor z = empty_like_type(DType::Int64, x.shape);
  for (std::size_t k = 0; k < parts.size(); ++k) {
    z.i[k] = static_cast<int64_t>(parts[k].size());
    for (std::size_t j = 0; j < parts[k].size(); ++j) y.s[k * width + j] = parts[k][j];
  }
  c.emit(std::move(y));
  c.emit(std::move(z));
}

Tensor label_encoder(const Ctx& c) {
  const Tensor& x = c.in(0);
  const Node& n = c.node;
  auto list = [&](const char* attr, const char* tensor_attr, DType want) -> std::optional<Tensor> {
    if (auto a = n.attr(attr)) {
      Tensor t;
      t.type = want;
      if (want == DType::String) t.s = a->strings;
      if (want == DType::Int64) t.i = a->ints;
      if (want == DType::Float) t.f = a->floats;
      t.shape = {static_cast<int64_t>(std::max({t.s.size(), t.i.size(), t.f.size()}))};
      return t;
    }
    if (auto a = n.attr(tensor_attr); a && a->t && a->t->type == want) return *a->t;
    return std::nullopt;
  };
  using Kind = std::pair<const char*, DType>;
  const Kind key_kinds[] = {{"keys_strings", DType::String}, {"keys_int64s", DType::Int64}, {"keys_floats", DType::Float}};
  const Kind value_kinds[] = {
      {"values_strings", DType::String}, {"values_int64s", DType::Int64}, {"values_floats", DType::Float}};
  std::optional<Tensor> keys;
  for (auto [attr, type] : key_kinds)
    if (!keys) keys = list(attr, "keys_tensor", type);
  std::optional<Tensor> values;
  for (auto [attr, type] : value_kinds)
    if (!values) values = list(attr, "values_tensor", type);
  if (!keys || !values || keys->size() != values->size()) fail("LabelEncoder needs matching keys and values");
  if (keys->type != x.type) fail("LabelEncoder key type differs from input");

  std::unordered_map<std::string, std::size_t> by_string;
  std::unordered_map<int64_t, std::size_t> by_int;
  std::unordered_map<float, std::size_t> by_float;
  for (std::size_t k = keys->size(); k-- > 0;) {
    if (keys->type == DType::String) by_string[keys->s[k]] = k;
    if (keys->type == DType::Int64) by_int[keys->i[k]] = k;
    if (keys->type == DType::Float) by_float[keys->f[k]] = k;
  }
  Tensor out = empty_like_type(values->type, x.shape);
  std::optional<Tensor> dflt;
  if (auto a = n.attr("default_tensor"); a && a->t) dflt = a->t;
  for (std::size_t k = 0; k < x.size(); ++k) {
    std::optional<std::size_t> hit;
    if (x.type == DType::String) {
      if (auto it = by_string.find(x.s[k]); it != by_string.end()) hit = it->second;
    } else if (x.type == DType::Int64) {
      if (auto it = by_int.find(x.i[k]); it != by_int.end()) hit = it->second;
    } else if (x.type == DType::Float) {
      if (auto it = by_float.find(x.f[k]); it != by_float.end()) hit = it->second;
    }
    if (hit) {
      copy_elem(*values, *hit, out, k);
    } else if (dflt) {
      copy_elem(*dflt, 0, out, k);
    } else if (values->type == DType::Int64) {
      out.i[k] = n.i("default_int64", -1);
    } else if (values->type == DType::Float) {
      out.f[k] = n.f("default_float", -0.0f);
    } else {
      out.s[k] = n.s("default_string", "_Unused");
    }
  }
  return out;
}

// ---------------------------------------------------------------- registry

using OpFn = std::function<void(Ctx&)>;

const std::unordered_map<std::string, OpFn>& registry() {
  static const std::unordered_map<std::string, OpFn> ops = [] {
    std::unordered_map<std::string, OpFn> m;
    auto binary = [&](const char* name, auto f) {
      m[name] = [f](Ctx& c) { c.emit(binary_numeric(c.in(0), c.in(1), f)); };
    };
    binary("Add", [](auto a, auto b) { return a + b; });
    binary("Sub", [](auto a, auto b) { return a - b; });
    binary("Mul", [](auto a, auto b) { return a * b; });
    binary("Div", [](auto a, auto b) { return a / b; });
    m["Pow"] = [](Ctx& c) {
      Tensor e = c.in(1).type == DType::Float ? c.in(1) : cast(c.in(1), ::onnx::TensorProto::FLOAT);
      c.emit(binary_numeric(c.in(0), e, [](double a, double b) { return std::pow(a, b); }));
    };
    auto variadic = [&](const char* name, auto f) {
      m[name] = [f](Ctx& c) {
        Tensor acc = c.in(0);
        for (std::size_t k = 1; k < c.node.inputs.size(); ++k) acc = binary_numeric(acc, c.in(k), f);
        c.emit(std::move(acc));
      };
    };
    variadic("Max", [](auto a, auto b) { return std::max(a, b); });
    variadic("Min", [](auto a, auto b) { return std::min(a, b); });
    m["Sum"] = [](Ctx& c) {
      Tensor acc = c.in(0);
      for (std::size_t k = 1; k < c.node.inputs.size(); ++k)
        acc = binary_numeric(acc, c.in(k), [](auto a, auto b) { return a + b; });
      c.emit(std::move(acc));
    };
    m["Equal"] = [](Ctx& c) { c.emit(compare(c.in(0), c.in(1), [](const auto& a, const auto& b) { return a == b; })); };
    m["Greater"] = [](Ctx& c) { c.emit(compare(c.in(0), c.in(1), [](const auto& a, const auto& b) { return a > b; })); };
    m["Less"] = [](Ctx& c) { c.emit(compare(c.in(0), c.in(1), [](const auto& a, const auto& b) { return a < b; })); };
    auto logical = [&](const char* name, bool is_and) {
      m[name] = [is_and](Ctx& c) {
        const Tensor &a = c.in(0), &b = c.in(1);
        if (a.type != DType::Bool || b.type != DType::Bool) fail("logical op expects bool tensors");
        Shape s = broadcast_shape(a.shape, b.shape);
        auto ia = broadcast_index(a.shape, s), ib = broadcast_index(b.shape, s);
        Tensor out = empty_like_type(DType::Bool, s);
        for (std::size_t n = 0; n < ia.size(); ++n)
          out.b[n] = is_and ? (a.b[ia[n]] && b.b[ib[n]]) : (a.b[ia[n]] || b.b[ib[n]]);
        c.emit(std::move(out));
      };
    };
    logical("And", true);
    logical("Or", false);
    m["Not"] = [](Ctx& c) {
      Tensor t = c.in(0);
      if (t.type != DType::Bool) fail("Not expects bool");
      for (auto& v : t.b) v = !v;
      c.emit(std::move(t));
    };
    m["Where"] = [](Ctx& c) {
      const Tensor &cond = c.in(0), &x = c.in(1), &y = c.in(2);
      if (cond.type != DType::Bool || x.type != y.type) fail("Where type mismatch");
      Shape s = broadcast_shape(broadcast_shape(cond.shape, x.shape), y.shape);
      auto ic = broadcast_index(cond.shape, s), ix = broadcast_index(x.shape, s), iy = broadcast_index(y.shape, s);
      Tensor out = empty_like_type(x.type, s);
      for (std::size_t n = 0; n < ic.size(); ++n) {
        if (cond.b[ic[n]]) {
          copy_elem(x, ix[n], out, n);
        } else {
          copy_elem(y, iy[n], out, n);
        }
      }
      c.emit(std::move(out));
    };
    auto unary = [&](const char* name, double (*f)(double)) {
      m[name] = [f](Ctx& c) { c.emit(unary_float(c.in(0), f)); };
    };
    unary("Relu", [](double v) { return v > 0 ? v : 0.0; });
    unary("Sigmoid", [](double v) { return v >= 0 ? 1.0 / (1.0 + std::exp(-v)) : std::exp(v) / (1.0 + std::exp(v)); });
    unary("Tanh", [](double v) { return std::tanh(v); });
    unary("Exp", [](double v) { return std::exp(v); });
    unary("Log", [](double v) { return std::log(v); });
    unary("Sqrt", [](double v) { return std::sqrt(v); });
    unary("Erf", [](double v) { return std::erf(v); });
    unary("Reciprocal", [](double v) { return 1.0 / v; });
    m["Neg"] = [](Ctx& c) {
      Tensor t = c.in(0);
      for (auto& v : t.f) v = -v;
      for (auto& v : t.i) v = -v;
      c.emit(std::move(t));
    };
    m["Abs"] = [](Ctx& c) {
      Tensor t = c.in(0);
      for (auto& v : t.f) v = std::fabs(v);
      for (auto& v : t.i) v = v < 0 ? -v : v;
      c.emit(std::move(t));
    };
    m["Identity"] = [](Ctx& c) { c.emit(c.in(0)); };
    m["Dropout"] = [](Ctx& c) {
      c.emit(c.in(0));
      if (c.node.outputs.size() > 1) c.emit(Tensor::bools(c.in(0).shape, std::vector<uint8_t>(c.in(0).size(), 1)));
    };
    m["Cast"] = [](Ctx& c) { c.emit(cast(c.in(0), c.node.i("to", 1))); };
    m["Constant"] = [](Ctx& c) {
      const Node& n = c.node;
      if (auto a = n.attr("value"); a && a->t) return c.emit(*a->t);
      if (auto a = n.attr("value_float")) return c.emit(Tensor::floats({}, {a->f}));
      if (auto a = n.attr("value_floats")) return c.emit(Tensor::floats({int64_t(a->floats.size())}, a->floats));
      if (auto a = n.attr("value_int")) return c.emit(Tensor::ints({}, {a->i}));
      if (auto a = n.attr("value_ints")) return c.emit(Tensor::ints({int64_t(a->ints.size())}, a->ints));
      if (auto a = n.attr("value_string")) return c.emit(Tensor::strings({}, {a->s}));
      if (auto a = n.attr("value_strings")) return c.emit(Tensor::strings({int64_t(a->strings.size())}, a->strings));
      fail("Constant without a supported value");
    };
    m["Shape"] = [](Ctx& c) {
      const auto& s = c.in(0).shape;
      int64_t r = static_cast<int64_t>(s.size());
      int64_t b = c.node.i("start", 0), e = c.node.i("end", r);
      if (b < 0) b += r;
      if (e < 0) e += r;
      b = std::clamp<int64_t>(b, 0, r), e = std::clamp<int64_t>(e, 0, r);
      std::vector<int64_t> v(s.begin() + b, s.begin() + std::max(b, e));
      c.emit(Tensor::ints({int64_t(v.size())}, v));
    };
    m["Gather"] = [](Ctx& c) { c.emit(gather(c)); };
    m["MatMul"] = [](Ctx& c) { c.emit(matmul(c.in(0), c.in(1))); };
    m["Gemm"] = [](Ctx& c) { c.emit(gemm(c)); };
    m["Softmax"] = [](Ctx& c) { c.emit(softmax(c)); };
    m["LayerNormalization"] = [](Ctx& c) { c.emit(layer_norm(c)); };
    m["ReduceMean"] = [](Ctx& c) { c.emit(reduce(c, ReduceKind::Mean)); };
    m["ReduceSum"] = [](Ctx& c) { c.emit(reduce(c, ReduceKind::Sum)); };
    m["ReduceMax"] = [](Ctx& c) { c.emit(reduce(c, ReduceKind::Max)); };
    m["Transpose"] = [](Ctx& c) {
      const Tensor& x = c.in(0);
      std::vector<int64_t> perm(x.shape.size());
      if (auto a = c.node.attr("perm")) {
        perm = a->ints;
      } else {
        std::iota(perm.rbegin(), perm.rend(), 0);
      }
      c.emit(transpose(x, perm));
    };
    m["Reshape"] = [](Ctx& c) { c.emit(reshape(c.in(0), as_ints(c.in(1)), c.node.i("allowzero", 0))); };
    m["Flatten"] = [](Ctx& c) {
      const Tensor& x = c.in(0);
      int64_t axis = c.node.i("axis", 1);
      if (axis < 0) axis += static_cast<int64_t>(x.shape.size());
      int64_t a = 1;
      for (int64_t k = 0; k < axis; ++k) a *= x.shape[k];
      c.emit(reshape(x, {a, a ? static_cast<int64_t>(x.size()) / a : 0}, true));
    };
    m["Squeeze"] = [](Ctx& c) {
      const Tensor& x = c.in(0);
      std::vector<int64_t> axes;
      if (c.has(1)) {
        axes = as_ints(c.in(1));
      } else if (auto a = c.node.attr("axes")) {
        axes = a->ints;
      }
      for (auto& ax : axes) ax = norm_axis(ax, x.shape.size());
      Shape s;
      for (std::size_t k = 0; k < x.shape.size(); ++k) {
        bool listed = std::find(axes.begin(), axes.end(), static_cast<int64_t>(k)) != axes.end();
        if (listed && x.shape[k] != 1) fail("Squeeze of a non-unit axis");
        if (axes.empty() ? x.shape[k] != 1 : !listed) s.push_back(x.shape[k]);
      }
      c.emit(reshape(x, s, true));
    };
    m["Unsqueeze"] = [](Ctx& c) {
      const Tensor& x = c.in(0);
      std::vector<int64_t> axes = c.has(1) ? as_ints(c.in(1)) : c.node.attr("axes") ? c.node.attr("axes")->ints
                                                                                      : std::vector<int64_t>{};
      const std::size_t r = x.shape.size() + axes.size();
      for (auto& ax : axes) ax = norm_axis(ax, r);
      std::sort(axes.begin(), axes.end());
      Shape s;
      std::size_t src = 0;
      for (std::size_t k = 0; k < r; ++k) {
        if (std::binary_search(axes.begin(), axes.end(), static_cast<int64_t>(k))) {
          s.push_back(1);
        } else {
          s.push_back(x.shape[src++]);
        }
      }
      c.emit(reshape(x, s, true));
    };
    m["Concat"] = [](Ctx& c) { c.emit(concat(c)); };
    m["Slice"] = [](Ctx& c) { c.emit(slice(c)); };
    m["Expand"] = [](Ctx& c) {
      const Tensor& x = c.in(0);
      Shape s = broadcast_shape(x.shape, as_ints(c.in(1)));
      c.emit(gather_by_index(x, s, broadcast_index(x.shape, s)));
    };
    m["ConstantOfShape"] = [](Ctx& c) {
      auto shape = as_ints(c.in(0));
      Tensor v = Tensor::floats({1}, {0.0f});
      if (auto a = c.node.attr("value"); a && a->t) v = *a->t;
      Tensor out = empty_like_type(v.type, shape);
      for (std::size_t k = 0; k < out.size(); ++k) copy_elem(v, 0, out, k);
      c.emit(std::move(out));
    };
    m["Clip"] = [](Ctx& c) {
      Tensor t = c.in(0);
      double lo = -std::numeric_limits<double>::infinity(), hi = std::numeric_limits<double>::infinity();
      if (c.has(1)) lo = c.in(1).f.at(0);
      if (c.has(2)) hi = c.in(2).f.at(0);
      if (auto a = c.node.attr("min")) lo = a->f;
      if (auto a = c.node.attr("max")) hi = a->f;
      for (auto& v : t.f) v = static_cast<float>(std::clamp<double>(v, lo, hi));
      c.emit(std::move(t));
    };
    m["StringNormalizer"] = [](Ctx& c) { c.emit(string_normalizer(c)); };
    m["StringSplit"] = [](Ctx& c) { string_split(c); };
    m["ai.onnx.ml:LabelEncoder"] = [](Ctx& c) { c.emit(label_encoder(c)); };
    return m;
  }();
  return ops;
}

std::string op_key(const Node& n) { return n.domain.empty() ? n.op : n.domain + ":" + n.op; }

}  // namespace

struct Model::Impl {
  std::vector<Node> nodes;
  std::unordered_map<std::string, Tensor> initializers;
  std::vector<ValueInfo> inputs;
  std::vector<ValueInfo> outputs;
  std::map<std::string, int64_t> opsets;
  std::map<std::string, std::string> metadata;
};

Model::Model(std::unique_ptr<Impl> impl) : impl_(std::move(impl)) {}
Model::Model(Model&&) noexcept = default;
Model& Model::operator=(Model&&) noexcept = default;
Model::~Model() = default;

Model Model::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::ModelLoadFailure, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse(buf.str());
  } catch (const Error& e) {
    if (e.code() == ErrorCode::UnsupportedModelSignature) throw;
    throw Error(ErrorCode::ModelLoadFailure, path.string() + ": " + e.what());
  }
}

Model Model::parse(const std::string& bytes) {
  ::onnx::ModelProto proto;
  if (bytes.empty() || !proto.ParseFromString(bytes)) throw Error(ErrorCode::ModelLoadFailure, "not a valid model file");
  if (!proto.has_graph()) throw Error(ErrorCode::ModelLoadFailure, "model has no graph");
  auto impl = std::make_unique<Impl>();
  for (const auto& op : proto.opset_import()) {
    std::string d = op.domain() == "ai.onnx" ? "" : op.domain();
    impl->opsets[d] = op.version();
  }
  if (impl->opsets.count("") && impl->opsets[""] > 21) {
    throw Error(ErrorCode::UnsupportedModelSignature, "opset " + std::to_string(impl->opsets[""]) + " is newer than 21");
  }
  if (impl->opsets.count("ai.onnx.ml") && impl->opsets["ai.onnx.ml"] > 4) {
    throw Error(ErrorCode::UnsupportedModelSignature, "ai.onnx.ml opset newer than 4");
  }
  for (const auto& p : proto.metadata_props()) impl->metadata[p.key()] = p.value();
  const auto& g = proto.graph();
  for (const auto& t : g.initializer()) impl->initializers.emplace(t.name(), from_proto(t));
  for (const auto& v : g.input())
    if (!impl->initializers.count(v.name())) impl->inputs.push_back(value_info(v));
  for (const auto& v : g.output()) impl->outputs.push_back(value_info(v));
  const auto& ops = registry();
  for (const auto& n : g.node()) {
    Node node = node_from_proto(n);
    if (!ops.count(op_key(node))) throw Error(ErrorCode::UnsupportedModelSignature, "operator " + op_key(node));
    impl->nodes.push_back(std::move(node));
  }
  return Model(std::move(impl));
}

const std::vector<ValueInfo>& Model::inputs() const { return impl_->inputs; }
const std::vector<ValueInfo>& Model::outputs() const { return impl_->outputs; }
const std::map<std::string, std::string>& Model::metadata() const { return impl_->metadata; }

int64_t Model::opset(const std::string& domain) const {
  auto it = impl_->opsets.find(domain);
  return it == impl_->opsets.end() ? 0 : it->second;
}

std::vector<Tensor> Model::run(const std::vector<Tensor>& inputs) const {
  if (inputs.size() != impl_->inputs.size()) {
    throw Error(ErrorCode::InvalidArgument, "model expects " + std::to_string(impl_->inputs.size()) + " inputs");
  }
  std::unordered_map<std::string, Tensor> env;
  for (std::size_t k = 0; k < inputs.size(); ++k) {
    if (inputs[k].type != impl_->inputs[k].type) {
      throw Error(ErrorCode::InvalidArgument, "input " + impl_->inputs[k].name + " must be " +
                                                  dtype_name(impl_->inputs[k].type));
    }
    env[impl_->inputs[k].name] = inputs[k];
  }
  auto lookup = [&](const std::string& name) -> const Tensor* {
    if (auto it = env.find(name); it != env.end()) return &it->second;
    if (auto it = impl_->initializers.find(name); it != impl_->initializers.end()) return &it->second;
    return nullptr;
  };
  const auto& ops = registry();
  for (const auto& node : impl_->nodes) {
    Ctx ctx{node, lookup, {}, opset(node.domain)};
    ops.at(op_key(node))(ctx);
    for (std::size_t k = 0; k < node.outputs.size() && k < ctx.out.size(); ++k)
      if (!node.outputs[k].empty()) env[node.outputs[k]] = std::move(ctx.out[k]);
  }
  std::vector<Tensor> out;
  for (const auto& o : impl_->outputs) {
    auto t = lookup(o.name);
    if (!t) throw Error(ErrorCode::MalformedModel, "output " + o.name + " was never produced");
    out.push_back(*t);
  }
  return out;
}

const std::vector<std::string>& Model::supported_ops() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& [k, _] : registry()) v.push_back(k);
    std::sort(v.begin(), v.end());
    return v;
  }();
  return names;
}

}  // namespace textmark::onnx
