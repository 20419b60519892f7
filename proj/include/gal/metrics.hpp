#pragma once

#include <Eigen/Dense>

#include <vector>

namespace gal {

struct EvalReport {
    double accuracy = 0.0;
    double micro_f1 = 0.0;  // equals accuracy for single-label multiclass
    double macro_f1 = 0.0;
    double mean_loss = 0.0;
    int n_evaluated = 0;
};

/// Evaluate argmax predictions (ties -> lowest class index) on `eval_set`.
/// Macro F1 averages over all proba.cols() classes, counting a class with
/// zero precision+recall denominator as 0. Mean loss is -ln p(i, truth(i))
/// with a 1e-12 probability floor.
EvalReport evaluate(const Eigen::MatrixXd& proba, const std::vector<int>& truth,
                    const std::vector<int>& eval_set);

}  // namespace gal
