#include "gal/metrics.hpp"

#include <cmath>
#include <stdexcept>

namespace gal {

EvalReport evaluate(const Eigen::MatrixXd& proba, const std::vector<int>& truth,
                    const std::vector<int>& eval_set) {
    if (eval_set.empty()) throw std::invalid_argument("evaluate: empty eval set");
    const int num_classes = static_cast<int>(proba.cols());

    std::vector<long> tp(num_classes, 0), fp(num_classes, 0), fn(num_classes, 0);
    long correct = 0;
    double loss = 0.0;
    for (int i : eval_set) {
        if (i < 0 || i >= proba.rows())
            throw std::out_of_range("evaluate: node index out of range");
        if (i >= static_cast<int>(truth.size()) || truth[i] < 0 ||
            truth[i] >= num_classes)
            throw std::invalid_argument("evaluate: truth missing or invalid");
        int pred = 0;
        for (int c = 1; c < num_classes; ++c)
            if (proba(i, c) > proba(i, pred)) pred = c;  // ties -> lowest index
        const int y = truth[i];
        if (pred == y) {
            ++correct;
            ++tp[y];
        } else {
            ++fp[pred];
            ++fn[y];
        }
        loss -= std::log(std::max(proba(i, y), 1e-12));
    }

    const double m = static_cast<double>(eval_set.size());
    EvalReport r;
    r.n_evaluated = static_cast<int>(eval_set.size());
    r.accuracy = correct / m;
    r.mean_loss = loss / m;

    // micro F1 from global counts; with single-label argmax predictions the
    // global FP and FN totals coincide, so this reduces to accuracy
    long tp_sum = 0, fp_sum = 0, fn_sum = 0;
    for (int c = 0; c < num_classes; ++c) {
        tp_sum += tp[c];
        fp_sum += fp[c];
        fn_sum += fn[c];
    }
    double denom = 2.0 * tp_sum + fp_sum + fn_sum;
    r.micro_f1 = denom > 0 ? 2.0 * tp_sum / denom : 0.0;

    double macro = 0.0;
    for (int c = 0; c < num_classes; ++c) {
        double d = 2.0 * tp[c] + fp[c] + fn[c];
        macro += d > 0 ? 2.0 * tp[c] / d : 0.0;
    }
    r.macro_f1 = macro / num_classes;
    return r;
}

}  // namespace gal
