#include "pasv/utility.hpp"

#include <algorithm>
#include <cmath>
#include <csignal>
#include <cstring>
#include <future>
#include <mutex>
#include <unordered_map>

#include <fcntl.h>
#include <poll.h>
#include <sys/wait.h>
#include <unistd.h>

#include <json.hpp>

#include "pasv/errors.hpp"
#include "pasv/rng.hpp"

namespace pasv {

namespace {

class TableUtility final : public UtilityFn {
public:
    TableUtility(int n, std::map<std::string, double> entries,
                 std::optional<double> default_value)
        : n_(n), entries_(std::move(entries)), default_(default_value) {}

    double evaluate(const Bitset& subset) const override {
        auto it = entries_.find(subset.canonical_key());
        if (it != entries_.end()) return it->second;
        if (default_) return *default_;
        throw MissingSubset("no table entry for subset " + subset.canonical_key());
    }

    std::string descriptor() const override {
        return "table(n=" + std::to_string(n_) + ",entries=" +
               std::to_string(entries_.size()) + ")";
    }

private:
    int n_;
    std::map<std::string, double> entries_;
    std::optional<double> default_;
};

class ElementaryGame final : public UtilityFn {
public:
    explicit ElementaryGame(Bitset T) : t_(std::move(T)) {}

    double evaluate(const Bitset& subset) const override {
        return t_.is_subset_of(subset) ? 1.0 : 0.0;
    }

    std::string descriptor() const override {
        return "elementary(" + t_.canonical_key() + ")";
    }

private:
    Bitset t_;
};

class LineageUtility final : public UtilityFn {
public:
    explicit LineageUtility(LineageSpec spec) : spec_(std::move(spec)) {}

    double evaluate(const Bitset& subset) const override {
        double v = 0.0;
        spec_.sources.for_each([&](int i) {
            if (subset.test(i)) v += spec_.gains.at(i);
        });
        for (const auto& [copy, source] : spec_.copy_to_source) {
            if (!subset.test(copy)) continue;
            if (subset.test(source)) {
                auto it = spec_.noise_penalty.find(copy);
                if (it != spec_.noise_penalty.end()) v -= it->second;
            } else {
                v += spec_.gains.at(source);
            }
        }
        return v;
    }

    std::string descriptor() const override {
        return "lineage(sources=" + spec_.sources.canonical_key() + ",copies=" +
               std::to_string(spec_.copy_to_source.size()) + ")";
    }

private:
    LineageSpec spec_;
};

class ExternalUtility final : public UtilityFn {
public:
    ExternalUtility(std::string command, std::chrono::milliseconds timeout)
        : command_(std::move(command)), timeout_(timeout) {
        spawn();
    }

    ~ExternalUtility() override { shutdown(); }

    double evaluate(const Bitset& subset) const override {
        std::lock_guard<std::mutex> lock(mutex_);
        std::string request = "{\"subset\":[";
        bool first = true;
        subset.for_each([&](int i) {
            if (!first) request += ',';
            request += std::to_string(i);
            first = false;
        });
        request += "]}\n";
        write_all(request);
        const std::string line = read_line();
        const auto reply = nlohmann::json::parse(line, nullptr, /*allow_exceptions=*/false);
        if (reply.is_discarded() || !reply.is_number()) {
            throw ProtocolViolation("expected a JSON number, got: " + line);
        }
        return reply.get<double>();
    }

    std::string descriptor() const override { return "external(" + command_ + ")"; }

private:
    void spawn() {
        // A write to a dead child must surface as ProcessFailure, not SIGPIPE.
        std::signal(SIGPIPE, SIG_IGN);
        int to_child[2];
        int from_child[2];
        if (pipe(to_child) != 0 || pipe(from_child) != 0) {
            throw ProcessFailure("pipe() failed: " + std::string(std::strerror(errno)));
        }
        pid_ = fork();
        if (pid_ < 0) {
            throw ProcessFailure("fork() failed: " + std::string(std::strerror(errno)));
        }
        if (pid_ == 0) {
            dup2(to_child[0], STDIN_FILENO);
            dup2(from_child[1], STDOUT_FILENO);
            close(to_child[0]);
            close(to_child[1]);
            close(from_child[0]);
            close(from_child[1]);
            execl("/bin/sh", "sh", "-c", command_.c_str(), static_cast<char*>(nullptr));
            _exit(127);
        }
        close(to_child[0]);
        close(from_child[1]);
        write_fd_ = to_child[1];
        read_fd_ = from_child[0];
    }

    void shutdown() {
        if (write_fd_ >= 0) close(write_fd_);
        if (read_fd_ >= 0) close(read_fd_);
        if (pid_ > 0) {
            kill(pid_, SIGTERM);
            int status = 0;
            waitpid(pid_, &status, 0);
        }
        write_fd_ = read_fd_ = -1;
        pid_ = -1;
    }

    void write_all(const std::string& data) const {
        std::size_t off = 0;
        while (off < data.size()) {
            ssize_t w = ::write(write_fd_, data.data() + off, data.size() - off);
            if (w < 0) {
                if (errno == EINTR) continue;
                throw ProcessFailure("child process is not reading requests");
            }
            off += static_cast<std::size_t>(w);
        }
    }

    std::string read_line() const {
        const auto deadline = std::chrono::steady_clock::now() + timeout_;
        for (;;) {
            auto nl = buffer_.find('\n');
            if (nl != std::string::npos) {
                std::string line = buffer_.substr(0, nl);
                buffer_.erase(0, nl + 1);
                return line;
            }
            const auto remaining = std::chrono::duration_cast<std::chrono::milliseconds>(
                deadline - std::chrono::steady_clock::now());
            if (remaining.count() <= 0) {
                throw Timeout("no reply within " + std::to_string(timeout_.count()) + " ms");
            }
            pollfd pfd{read_fd_, POLLIN, 0};
            int pr = poll(&pfd, 1, static_cast<int>(remaining.count()));
            if (pr == 0) {
                throw Timeout("no reply within " + std::to_string(timeout_.count()) + " ms");
            }
            if (pr < 0) {
                if (errno == EINTR) continue;
                throw ProcessFailure("poll() failed: " + std::string(std::strerror(errno)));
            }
            char chunk[4096];
            ssize_t r = ::read(read_fd_, chunk, sizeof(chunk));
            if (r == 0) throw ProcessFailure("child process closed its output");
            if (r < 0) {
                if (errno == EINTR) continue;
                throw ProcessFailure("read() failed: " + std::string(std::strerror(errno)));
            }
            buffer_.append(chunk, static_cast<std::size_t>(r));
        }
    }

    std::string command_;
    std::chrono::milliseconds timeout_;
    mutable std::mutex mutex_;
    mutable std::string buffer_;
    pid_t pid_ = -1;
    int write_fd_ = -1;
    int read_fd_ = -1;
};

class LogisticPredictor final : public Predictor {
public:
    LogisticPredictor(std::vector<std::vector<double>> weights, std::vector<double> bias)
        : weights_(std::move(weights)), bias_(std::move(bias)) {
        if (weights_.empty() || weights_.size() != bias_.size()) {
            throw InvalidArgument("predictor needs one weight row and bias per class");
        }
        for (const auto& row : weights_) {
            if (row.size() != weights_.front().size()) {
                throw DimensionMismatch("predictor weight rows differ in length");
            }
        }
    }

    int class_count() const override { return static_cast<int>(weights_.size()); }

    double predict_proba(std::span<const double> x, int y) const override {
        if (y < 0 || y >= class_count()) {
            throw IndexOutOfRange("class " + std::to_string(y) + " out of range");
        }
        if (x.size() != weights_.front().size()) {
            throw DimensionMismatch("feature vector length does not match predictor");
        }
        std::vector<double> scores(class_count());
        for (int c = 0; c < class_count(); ++c) {
            double s = bias_[c];
            for (std::size_t j = 0; j < x.size(); ++j) s += weights_[c][j] * x[j];
            scores[c] = s;
        }
        const double m = *std::max_element(scores.begin(), scores.end());
        double z = 0.0;
        for (double s : scores) z += std::exp(s - m);
        return std::exp(scores[y] - m) / z;
    }

private:
    std::vector<std::vector<double>> weights_;
    std::vector<double> bias_;
};

class KnnImputationUtility final : public UtilityFn {
public:
    KnnImputationUtility(TabularDataset train, TabularDataset eval_points,
                         PredictorPtr predictor, int k, int n_eval, std::uint64_t seed)
        : train_(std::move(train)),
          eval_(std::move(eval_points)),
          predictor_(std::move(predictor)),
          k_(k),
          seed_(seed) {
        if (k_ < 1) throw InvalidArgument("neighbor count must be at least 1");
        if (k_ > train_.row_count()) {
            throw KTooLarge("k = " + std::to_string(k_) + " exceeds " +
                            std::to_string(train_.row_count()) + " training rows");
        }
        if (n_eval < 1) throw InvalidArgument("n_eval must be at least 1");
        if (n_eval > eval_.row_count()) {
            throw InvalidArgument("n_eval exceeds the evaluation pool (points are drawn without replacement)");
        }
        if (train_.feature_count() != eval_.feature_count()) {
            throw DimensionMismatch("train and evaluation feature counts differ");
        }
        for (int y : eval_.labels) {
            if (y < 0 || y >= predictor_->class_count()) {
                throw IndexOutOfRange("evaluation label out of predictor range");
            }
        }

        // Evaluation points and the empty-subset tie order are fixed here so
        // the utility is a deterministic function of the subset.
        eval_idx_.resize(eval_.row_count());
        for (int i = 0; i < eval_.row_count(); ++i) eval_idx_[i] = i;
        Rng pick(derive_seed(seed, "knn-eval-points"));
        for (int i = 0; i < n_eval; ++i) {
            int j = i + static_cast<int>(pick.next_below(eval_idx_.size() - i));
            std::swap(eval_idx_[i], eval_idx_[j]);
        }
        eval_idx_.resize(n_eval);

        shuffled_rows_.resize(train_.row_count());
        for (int i = 0; i < train_.row_count(); ++i) shuffled_rows_[i] = i;
        Rng shuffle(derive_seed(seed, "knn-empty-ties"));
        for (int i = train_.row_count() - 1; i > 0; --i) {
            int j = static_cast<int>(shuffle.next_below(i + 1));
            std::swap(shuffled_rows_[i], shuffled_rows_[j]);
        }
    }

    double evaluate(const Bitset& subset) const override {
        if (subset.size() != train_.feature_count()) {
            throw DimensionMismatch("subset size does not match feature count");
        }
        const std::vector<int> revealed = subset.members();
        std::vector<double> composite(train_.feature_count());
        double total = 0.0;
        for (int t : eval_idx_) {
            const auto& x = eval_.rows[t];
            const int y = eval_.labels[t];
            const std::vector<int> neighbors = nearest_rows(x, revealed);
            double acc = 0.0;
            for (int r : neighbors) {
                composite = train_.rows[r];
                for (int j : revealed) composite[j] = x[j];
                acc += predictor_->predict_proba(composite, y);
            }
            total += acc / k_;
        }
        return total / static_cast<double>(eval_idx_.size());
    }

    std::string descriptor() const override {
        return "knn(k=" + std::to_string(k_) + ",n_eval=" +
               std::to_string(eval_idx_.size()) + ",seed=" + std::to_string(seed_) + ")";
    }

private:
    std::vector<int> nearest_rows(const std::vector<double>& x,
                                  const std::vector<int>& revealed) const {
        if (revealed.empty()) {
            return {shuffled_rows_.begin(), shuffled_rows_.begin() + k_};
        }
        // Squared distance over revealed coordinates; ties break by row index.
        std::vector<std::pair<double, int>> d;
        d.reserve(train_.row_count());
        for (int r = 0; r < train_.row_count(); ++r) {
            double d2 = 0.0;
            for (int j : revealed) {
                const double diff = x[j] - train_.rows[r][j];
                d2 += diff * diff;
            }
            d.emplace_back(d2, r);
        }
        std::nth_element(d.begin(), d.begin() + (k_ - 1), d.end());
        std::sort(d.begin(), d.begin() + k_);
        std::vector<int> out(k_);
        for (int i = 0; i < k_; ++i) out[i] = d[i].second;
        return out;
    }

    TabularDataset train_;
    TabularDataset eval_;
    PredictorPtr predictor_;
    int k_;
    std::uint64_t seed_;
    std::vector<int> eval_idx_;
    std::vector<int> shuffled_rows_;
};

class CachedUtility final : public UtilityFn {
public:
    explicit CachedUtility(UtilityPtr inner) : inner_(std::move(inner)) {}

    double evaluate(const Bitset& subset) const override {
        const std::string key = subset.canonical_key();
        std::shared_future<double> fut;
        bool owner = false;
        std::promise<double> promise;
        {
            std::lock_guard<std::mutex> lock(mutex_);
            auto it = memo_.find(key);
            if (it != memo_.end()) {
                fut = it->second;
            } else {
                fut = promise.get_future().share();
                memo_.emplace(key, fut);
                owner = true;
            }
        }
        if (owner) {
            try {
                promise.set_value(inner_->evaluate(subset));
            } catch (...) {
                // Errors propagate to every waiter but are not cached.
                std::lock_guard<std::mutex> lock(mutex_);
                memo_.erase(key);
                promise.set_exception(std::current_exception());
            }
        }
        return fut.get();
    }

    std::string descriptor() const override { return inner_->descriptor(); }

private:
    UtilityPtr inner_;
    mutable std::mutex mutex_;
    mutable std::unordered_map<std::string, std::shared_future<double>> memo_;
};

} // namespace

UtilityPtr table_utility(int n, std::map<std::string, double> entries,
                         std::optional<double> default_value) {
    if (entries.empty()) throw InvalidArgument("utility table is empty");
    return std::make_shared<TableUtility>(n, std::move(entries), default_value);
}

UtilityPtr elementary_game(const Bitset& T) {
    return std::make_shared<ElementaryGame>(T);
}

UtilityPtr lineage_utility(const LineageSpec& spec) {
    for (const auto& [copy, source] : spec.copy_to_source) {
        if (copy == source) {
            throw BadCopyMap("player " + std::to_string(copy) + " copies itself");
        }
        if (!spec.sources.test(source)) {
            throw BadCopyMap("copy " + std::to_string(copy) +
                             " points at non-source " + std::to_string(source));
        }
        if (spec.sources.test(copy)) {
            throw BadCopyMap("player " + std::to_string(copy) +
                             " is both a source and a copy");
        }
    }
    bool gains_ok = true;
    spec.sources.for_each([&](int i) {
        auto it = spec.gains.find(i);
        if (it == spec.gains.end() || !(it->second > 0.0)) gains_ok = false;
    });
    if (!gains_ok) throw BadCopyMap("every source needs a positive gain");
    return std::make_shared<LineageUtility>(spec);
}

UtilityPtr external_utility(int, std::string command, std::chrono::milliseconds timeout) {
    return std::make_shared<ExternalUtility>(std::move(command), timeout);
}

PredictorPtr logistic_predictor(std::vector<std::vector<double>> weights,
                                std::vector<double> bias) {
    return std::make_shared<LogisticPredictor>(std::move(weights), std::move(bias));
}

UtilityPtr knn_imputation_utility(TabularDataset train, TabularDataset eval_points,
                                  PredictorPtr predictor, int k, int n_eval,
                                  std::uint64_t seed) {
    return std::make_shared<KnnImputationUtility>(std::move(train), std::move(eval_points),
                                                  std::move(predictor), k, n_eval, seed);
}

UtilityPtr cached(UtilityPtr inner) {
    if (std::dynamic_pointer_cast<const CachedUtility>(inner)) return inner;
    return std::make_shared<CachedUtility>(std::move(inner));
}

} // namespace pasv
