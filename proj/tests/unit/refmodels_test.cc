// Copyright 2026 The PaRCE Toolkit Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include <gtest/gtest.h>

#include "parce/error.h"
#include "parce/refmodels/autoencoder.h"
#include "parce/refmodels/classifier.h"
#include "parce/refmodels/corpus.h"
#include "parce/refmodels/inpainter.h"
#include "parce/refmodels/perturb.h"
#include "parce/regional/segmentation.h"

namespace parce::refmodels {
namespace {

double HoldoutAccuracy(const LinearClassifier& m, std::span<const CorpusItem> items) {
  int correct = 0;
  for (const auto& it : items) {
    const Prediction p = m.Predict(it.image);
    correct += std::max_element(p.probs.begin(), p.probs.end()) - p.probs.begin() ==
               it.label;
  }
  return double(correct) / items.size();
}

std::vector<double> Ranks(const std::vector<double>& v) {
  std::vector<size_t> idx(v.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](size_t a, size_t b) { return v[a] < v[b]; });
  std::vector<double> r(v.size());
  for (size_t i = 0; i < idx.size();) {
    size_t j = i;
    while (j < idx.size() && v[idx[j]] == v[idx[i]]) ++j;
    for (size_t q = i; q < j; ++q) r[idx[q]] = 0.5 * (i + j - 1);
    i = j;
  }
  return r;
}

double Spearman(const std::vector<double>& a, const std::vector<double>& b) {
  const std::vector<double> ra = Ranks(a), rb = Ranks(b);
  const double ma = std::accumulate(ra.begin(), ra.end(), 0.0) / ra.size();
  const double mb = std::accumulate(rb.begin(), rb.end(), 0.0) / rb.size();
  double sab = 0, saa = 0, sbb = 0;
  for (size_t i = 0; i < ra.size(); ++i) {
    sab += (ra[i] - ma) * (rb[i] - mb);
    saa += (ra[i] - ma) * (ra[i] - ma);
    sbb += (rb[i] - mb) * (rb[i] - mb);
  }
  return sab / std::sqrt(saa * sbb);
}

// Default corpus and models, trained once for the whole suite.
class DefaultModels : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    corpus_ = new SyntheticCorpus(GenerateSyntheticCorpus(42));
    classifier_ = new LinearClassifier(TrainClassifier(*corpus_));
    autoencoder_ = new LinearAutoencoder(TrainAutoencoder(*corpus_));
    inpainter_ = new Inpainter(TrainInpainter(
        *corpus_,
        [](const ImageTensor& img) {
          const auto map = regional::FelzenszwalbSegment(img);
          std::vector<PixelMask> masks;
          for (int s = 0; s < map.segment_count; ++s) masks.push_back(map.Mask(s));
          return masks;
        }));
  }
  static void TearDownTestSuite() {
    delete corpus_;
    delete classifier_;
    delete autoencoder_;
    delete inpainter_;
  }
  static SyntheticCorpus* corpus_;
  static LinearClassifier* classifier_;
  static LinearAutoencoder* autoencoder_;
  static Inpainter* inpainter_;
};

SyntheticCorpus* DefaultModels::corpus_ = nullptr;
LinearClassifier* DefaultModels::classifier_ = nullptr;
LinearAutoencoder* DefaultModels::autoencoder_ = nullptr;
Inpainter* DefaultModels::inpainter_ = nullptr;

TEST(Corpus, SameSeedIsBitIdentical) {
  const CorpusSizes small{20, 10, 10, 10};
  EXPECT_EQ(GenerateSyntheticCorpus(5, small), GenerateSyntheticCorpus(5, small));
  EXPECT_FALSE(GenerateSyntheticCorpus(5, small) == GenerateSyntheticCorpus(6, small));
}

TEST(Corpus, MinimalSizes) {
  const SyntheticCorpus c = GenerateSyntheticCorpus(1, {1, 1, 1, 1});
  ASSERT_EQ(c.train.size(), 1u);
  ASSERT_EQ(c.test_ood.size(), 1u);
  const auto& mask = c.test_ood[0].anomaly_mask;
  EXPECT_GT(std::count(mask.begin(), mask.end(), 1), 0);
  EXPECT_THROW(GenerateSyntheticCorpus(1, {0, 1, 1, 1}), Error);
}

TEST(Corpus, Invariants) {
  const SyntheticCorpus c = GenerateSyntheticCorpus(42);
  EXPECT_EQ(c.train.size(), 600u);
  EXPECT_EQ(c.holdout.size(), 200u);
  EXPECT_EQ(c.test_id.size(), 200u);
  EXPECT_EQ(c.test_ood.size(), 200u);
  EXPECT_EQ(c.classes.size(), 3);
  std::set<std::string> ids;
  for (const auto* split : {&c.train, &c.holdout, &c.test_id, &c.test_ood}) {
    for (const auto& it : *split) {
      EXPECT_TRUE(ids.insert(it.id).second) << it.id;
      EXPECT_EQ(it.image.height, 32);
      EXPECT_EQ(it.image.width, 32);
      EXPECT_NO_THROW(ValidateImage(it.image));
      EXPECT_GE(it.label, 0);
      EXPECT_LT(it.label, 3);
    }
  }
  for (const auto* split : {&c.train, &c.holdout, &c.test_id}) {
    for (const auto& it : *split) {
      EXPECT_FALSE(it.ood);
      EXPECT_TRUE(it.anomaly_mask.empty());
    }
  }
  for (const auto& it : c.test_ood) {
    EXPECT_TRUE(it.ood);
    ASSERT_EQ(it.anomaly_mask.size(), 32u * 32u);
    EXPECT_GT(std::count(it.anomaly_mask.begin(), it.anomaly_mask.end(), 1), 0);
  }
}

TEST(Softmax, ClosedForms) {
  const std::vector<double> p = Softmax(std::vector<double>{10, 0, 0});
  const double denom = std::exp(10.0) + 2.0;
  EXPECT_NEAR(p[0], std::exp(10.0) / denom, 1e-12);
  EXPECT_NEAR(p[1], 1.0 / denom, 1e-12);
  EXPECT_NEAR(p[0] + p[1] + p[2], 1.0, 1e-12);
  const std::vector<double> q = Softmax(std::vector<double>{1010, 1000, 1000});
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(p[i], q[i], 1e-12);
}

TEST(Classifier, ZeroModelIsUniform) {
  const int dim = 4 * 4 * 3;
  const LinearClassifier m(Eigen::MatrixXd::Zero(3, dim), Eigen::VectorXd::Zero(3),
                           Eigen::VectorXd::Zero(dim));
  const Prediction p = m.Predict(ImageTensor(4, 4, 0.3));
  for (double v : p.probs) EXPECT_DOUBLE_EQ(v, 1.0 / 3.0);
  EXPECT_THROW(m.Predict(ImageTensor(5, 4, 0.3)), Error);
  try {
    m.Predict(ImageTensor(5, 4, 0.3));
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kInvalidArgument);
  }
}

TEST(Classifier, OneClassCorpus) {
  SyntheticCorpus c = GenerateSyntheticCorpus(3, {30, 5, 5, 5});
  for (auto& it : c.train) it.label = 0;
  const LinearClassifier m = TrainClassifier(c.train, 1, {1.0, 20, 0.0});
  for (const auto& it : c.test_ood) {
    EXPECT_GE(m.Predict(it.image).probs[0], 1.0 - 1e-6);
  }
}

TEST(Classifier, DivergenceIsReported) {
  const SyntheticCorpus c = GenerateSyntheticCorpus(3, {30, 5, 5, 5});
  try {
    TrainClassifier(c.train, 3, {1e308, 5, 0.0});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kTrainingFailure);
  }
}

TEST(Classifier, LabelPermutationKeepsAccuracy) {
  SyntheticCorpus c = GenerateSyntheticCorpus(8, {150, 60, 5, 5});
  const ClassifierConfig cfg{5.0, 60, 0.0};
  const double base = HoldoutAccuracy(TrainClassifier(c.train, 3, cfg), c.holdout);
  for (auto* split : {&c.train, &c.holdout}) {
    for (auto& it : *split) it.label = (it.label + 1) % 3;
  }
  EXPECT_EQ(HoldoutAccuracy(TrainClassifier(c.train, 3, cfg), c.holdout), base);
}

TEST_F(DefaultModels, ClassifierAccuracyAndLossTrace) {
  const double acc = HoldoutAccuracy(*classifier_, corpus_->holdout);
  EXPECT_GE(acc, 0.85);
  EXPECT_LE(acc, 0.98);
  const auto& trace = classifier_->loss_trace();
  ASSERT_GT(trace.size(), 11u);
  for (size_t e = 11; e < trace.size(); ++e) EXPECT_LE(trace[e], trace[e - 1]) << e;
  for (const auto& it : corpus_->holdout) {
    const Prediction p = classifier_->Predict(it.image);
    EXPECT_NEAR(std::accumulate(p.probs.begin(), p.probs.end(), 0.0), 1.0, 1e-12);
  }
}

TEST(Autoencoder, ClosedForms) {
  const int dim = 2 * 2 * 3;
  ImageTensor img(2, 2, 0.5);
  const LinearAutoencoder zero(Eigen::MatrixXd::Zero(1, dim), Eigen::VectorXd::Zero(1),
                               Eigen::MatrixXd::Zero(dim, 1), Eigen::VectorXd::Zero(dim),
                               Eigen::VectorXd::Zero(dim));
  EXPECT_DOUBLE_EQ(ReconLoss(zero, img), 0.25);
  const LinearAutoencoder echo(Eigen::MatrixXd::Zero(1, dim), Eigen::VectorXd::Zero(1),
                               Eigen::MatrixXd::Zero(dim, 1), Eigen::VectorXd::Zero(dim),
                               Eigen::VectorXd::Constant(dim, 0.5));
  EXPECT_EQ(ReconLoss(echo, img), 0.0);
}

TEST(Autoencoder, DeterministicAndDivergence) {
  const SyntheticCorpus c = GenerateSyntheticCorpus(3, {40, 5, 5, 5});
  const AutoencoderConfig cfg{8, 2e-3, 3, 10, 5};
  const LinearAutoencoder a = TrainAutoencoder(c, cfg);
  const LinearAutoencoder b = TrainAutoencoder(c, cfg);
  EXPECT_TRUE(a.encoder() == b.encoder());
  EXPECT_TRUE(a.decoder() == b.decoder());
  try {
    TrainAutoencoder(c, {8, 1e200, 3, 10, 5});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kTrainingFailure);
  }
}

TEST_F(DefaultModels, ReconLossSeparatesOod) {
  double id = 0, ood = 0;
  for (const auto& it : corpus_->holdout) {
    const double l = ReconLoss(*autoencoder_, it.image);
    EXPECT_GE(l, 0.0);
    id += l;
  }
  for (const auto& it : corpus_->test_ood) ood += ReconLoss(*autoencoder_, it.image);
  EXPECT_LT(id / corpus_->holdout.size(), ood / corpus_->test_ood.size());
  EXPECT_EQ(autoencoder_->latent_dim(), 32);
  EXPECT_LT(autoencoder_->latent_dim(), autoencoder_->input_dim());
}

TEST_F(DefaultModels, InpainterLocalityAndMasks) {
  const ImageTensor& img = corpus_->holdout[0].image;
  PixelMask mask(img.pixel_count(), 0);
  for (int p = 100; p < 140; ++p) mask[p] = 1;
  const ImageTensor out = inpainter_->Inpaint(img, mask);
  EXPECT_NEAR(SegmentInpaintLoss(*inpainter_, img, mask),
              MaskedMeanSquaredError(out, img, mask), 1e-15);
  ImageTensor altered = img;
  for (int c = 0; c < 3; ++c) altered.pixels[3 * 5 + c] = 1.0 - altered.pixels[3 * 5 + c];
  EXPECT_EQ(MaskedMeanSquaredError(out, img, mask),
            MaskedMeanSquaredError(out, altered, mask));

  // A masked pixel set to its own prediction costs nothing: masked
  // values are hidden from the model, so the prediction stays put.
  PixelMask one(img.pixel_count(), 0);
  one[77] = 1;
  const ImageTensor pred = inpainter_->Inpaint(img, one);
  ImageTensor target = img;
  for (int c = 0; c < 3; ++c) target.pixels[77 * 3 + c] = pred.pixels[77 * 3 + c];
  EXPECT_NEAR(SegmentInpaintLoss(*inpainter_, target, one), 0.0, 1e-20);

  EXPECT_THROW(SegmentInpaintLoss(*inpainter_, img, PixelMask(img.pixel_count(), 0)),
               Error);
  EXPECT_THROW(SegmentInpaintLoss(*inpainter_, img, PixelMask(img.pixel_count(), 1)),
               Error);
}

TEST_F(DefaultModels, InpaintLossHigherOnAnomalies) {
  double id = 0;
  int n = 0;
  for (const auto& it : corpus_->holdout) {
    const auto map = regional::FelzenszwalbSegment(it.image);
    if (map.segment_count < 2) continue;
    for (int s = 0; s < map.segment_count; ++s) {
      id += SegmentInpaintLoss(*inpainter_, it.image, map.Mask(s));
      ++n;
    }
  }
  double ood = 0;
  for (const auto& it : corpus_->test_ood) {
    ood += SegmentInpaintLoss(*inpainter_, it.image, it.anomaly_mask);
  }
  EXPECT_LT(id / n, ood / corpus_->test_ood.size());
}

TEST(Perturb, NeutralLevelIsIdentity) {
  const SyntheticCorpus c = GenerateSyntheticCorpus(2, {3, 1, 1, 1});
  for (Perturbation p : kAllPerturbations) {
    const ImageTensor out = PerturbImage(c.train[0].image, p, NeutralLevel(p), 9);
    for (size_t i = 0; i < out.pixels.size(); ++i) {
      EXPECT_NEAR(out.pixels[i], c.train[0].image.pixels[i], 1e-12);
    }
  }
  EXPECT_EQ(NeutralLevel(Perturbation::kContrast), 10);
}

TEST(Perturb, LevelValues) {
  EXPECT_DOUBLE_EQ(PerturbationValue(Perturbation::kSaturation, 0), 0.0);
  EXPECT_DOUBLE_EQ(PerturbationValue(Perturbation::kSaturation, 20), 2.0);
  EXPECT_DOUBLE_EQ(PerturbationValue(Perturbation::kContrast, 10), 1.0);
  EXPECT_DOUBLE_EQ(PerturbationValue(Perturbation::kBrightness, 0), -0.5);
  EXPECT_DOUBLE_EQ(PerturbationValue(Perturbation::kBrightness, 20), 0.5);
  EXPECT_DOUBLE_EQ(PerturbationValue(Perturbation::kPixelation, 0), 1.0);
  EXPECT_DOUBLE_EQ(PerturbationValue(Perturbation::kPixelation, 20), 21.0);
  EXPECT_DOUBLE_EQ(PerturbationValue(Perturbation::kNoise, 20), 0.5);
  EXPECT_THROW(PerturbationValue(Perturbation::kNoise, 21), Error);
  EXPECT_THROW(PerturbImage(ImageTensor(2, 2), Perturbation::kNoise, -1, 0), Error);
  EXPECT_THROW(ParsePerturbation("blur"), Error);
  for (Perturbation p : kAllPerturbations) {
    EXPECT_EQ(ParsePerturbation(PerturbationName(p)), p);
  }
}

TEST(Perturb, BrightnessClosedForm) {
  const ImageTensor out =
      PerturbImage(ImageTensor(4, 4, 0.5), Perturbation::kBrightness, 20, 0);
  for (double v : out.pixels) EXPECT_EQ(v, 1.0);
}

TEST(Perturb, PixelationMatchesBlockAverages) {
  const SyntheticCorpus c = GenerateSyntheticCorpus(4, {1, 1, 1, 1});
  const ImageTensor& img = c.train[0].image;
  const ImageTensor out = PerturbImage(img, Perturbation::kPixelation, 20, 0);
  const int b = 21;
  for (int by = 0; by < img.height; by += b) {
    for (int bx = 0; bx < img.width; bx += b) {
      const int ey = std::min(by + b, img.height), ex = std::min(bx + b, img.width);
      for (int ch = 0; ch < 3; ++ch) {
        double sum = 0;
        for (int y = by; y < ey; ++y) {
          for (int x = bx; x < ex; ++x) sum += img.at(y, x, ch);
        }
        const double mean = sum / ((ey - by) * (ex - bx));
        for (int y = by; y < ey; ++y) {
          for (int x = bx; x < ex; ++x) EXPECT_NEAR(out.at(y, x, ch), mean, 1e-12);
        }
      }
    }
  }
}

TEST(Perturb, OutputsStayInRangeAndNoiseIsSeeded) {
  const SyntheticCorpus c = GenerateSyntheticCorpus(4, {1, 1, 1, 1});
  for (Perturbation p : kAllPerturbations) {
    for (int l = 0; l < kPerturbationLevels; ++l) {
      EXPECT_NO_THROW(ValidateImage(PerturbImage(c.train[0].image, p, l, 3)));
    }
  }
  EXPECT_EQ(PerturbImage(c.train[0].image, Perturbation::kNoise, 10, 3),
            PerturbImage(c.train[0].image, Perturbation::kNoise, 10, 3));
  EXPECT_FALSE(PerturbImage(c.train[0].image, Perturbation::kNoise, 10, 3) ==
               PerturbImage(c.train[0].image, Perturbation::kNoise, 10, 4));
}

TEST_F(DefaultModels, AccuracyFallsWithNoise) {
  std::vector<double> sigma, acc;
  for (int l = 0; l < kPerturbationLevels; ++l) {
    int correct = 0;
    for (size_t i = 0; i < corpus_->holdout.size(); ++i) {
      const auto& it = corpus_->holdout[i];
      const Prediction p =
          classifier_->Predict(PerturbImage(it.image, Perturbation::kNoise, l, 1000 + i));
      correct += std::max_element(p.probs.begin(), p.probs.end()) - p.probs.begin() ==
                 it.label;
    }
    sigma.push_back(PerturbationValue(Perturbation::kNoise, l));
    acc.push_back(double(correct) / corpus_->holdout.size());
  }
  EXPECT_LE(Spearman(sigma, acc), -0.8);
}

}  // namespace
}  // namespace parce::refmodels
