#include "rdchain/linear_process.hpp"

#include "rdchain/error.hpp"

namespace rdchain {

LinearProcessSpec::LinearProcessSpec(Eigen::MatrixXd pts) : points(std::move(pts)) {
  if (points.rows() == 0 || points.cols() == 0) fail(ErrorKind::InvalidSpace, "process needs at least one point");
  if (!points.allFinite()) fail(ErrorKind::InvalidSpace, "non-finite process point");
}

}  // namespace rdchain
