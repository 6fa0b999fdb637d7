#!/usr/bin/env python3
# Copyright 2026 The FairHOME Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Regenerates the synthetic datasets bundled under data/.

Both fixtures plant a direct dependence of the label on the protected
attributes so that a plain classifier picks up subgroup bias.

  german_synth.csv  1,000 rows, protected sex/age, favorable "good"
  compas_synth.csv  2,000 rows, protected sex/race/age, favorable "no"
"""

import argparse
import csv
import json
import pathlib

import numpy as np


def _sigmoid(z):
    return 1.0 / (1.0 + np.exp(-z))


def german(rng, n=1000):
    sex = np.where(rng.random(n) < 0.55, "male", "female")
    age = np.where(rng.random(n) < 0.6, "old", "young")
    male = sex == "male"
    old = age == "old"

    checking = rng.choice(["A11", "A12", "A13", "A14"], size=n,
                          p=[0.27, 0.27, 0.07, 0.39])
    savings = rng.choice(["A61", "A62", "A63", "A64", "A65"], size=n,
                         p=[0.6, 0.1, 0.06, 0.05, 0.19])
    housing = rng.choice(["own", "rent", "free"], size=n, p=[0.71, 0.18, 0.11])
    duration = np.clip(np.round(rng.gamma(3.0, 7.0, size=n)), 4, 72)
    amount = np.clip(np.round(np.exp(rng.normal(7.9, 0.7, size=n)
                                     + 0.25 * male)), 250, 18500)
    installment = rng.integers(1, 5, size=n)
    employment = np.clip(np.round(rng.gamma(2.0, 2.0, size=n)
                                  + 4.0 * old), 0, 25)

    logit = (-0.5
             + 1.4 * (checking == "A14") + 0.5 * (checking == "A13")
             - 0.6 * (checking == "A11")
             + 0.6 * np.isin(savings, ["A64", "A65"])
             + 0.3 * (housing == "own")
             - 0.045 * (duration - 20.0)
             - 0.00008 * (amount - 3000.0)
             - 0.15 * (installment - 2.5)
             + 0.04 * (employment - 5.0)
             + 0.9 * male + 0.9 * old)
    label = np.where(rng.random(n) < _sigmoid(logit), "good", "bad")

    header = ["checking_status", "duration", "credit_amount", "savings",
              "installment_rate", "employment_years", "housing", "sex", "age",
              "credit"]
    rows = zip(checking, duration.astype(int), amount.astype(int), savings,
               installment, employment.astype(int), housing, sex, age, label)
    schema = {
        "attributes": [
            {"name": "checking_status", "kind": "categorical"},
            {"name": "duration", "kind": "numeric"},
            {"name": "credit_amount", "kind": "numeric"},
            {"name": "savings", "kind": "categorical"},
            {"name": "installment_rate", "kind": "numeric"},
            {"name": "employment_years", "kind": "numeric"},
            {"name": "housing", "kind": "categorical"},
            {"name": "sex", "kind": "categorical"},
            {"name": "age", "kind": "categorical"},
        ],
        "protected": ["sex", "age"],
        "label_column": "credit",
        "favorable_value": "good",
    }
    return header, rows, schema


def compas(rng, n=2000):
    sex = np.where(rng.random(n) < 0.6, "male", "female")
    race = np.where(rng.random(n) < 0.5, "caucasian", "other")
    age = np.where(rng.random(n) < 0.7, "over25", "under25")
    male = sex == "male"
    other = race == "other"
    young = age == "under25"

    priors = np.clip(np.round(rng.gamma(1.2, 2.5, size=n)), 0, 38)
    juvenile = rng.poisson(0.3, size=n)
    degree = rng.choice(["F", "M"], size=n, p=[0.64, 0.36])
    length_of_stay = np.clip(np.round(rng.gamma(1.0, 12.0, size=n)), 0, 400)

    logit = (1.2
             - 0.22 * (priors - 3.0)
             - 0.4 * juvenile
             - 0.3 * (degree == "F")
             - 0.01 * (length_of_stay - 12.0)
             - 0.45 * male - 0.45 * other - 0.45 * young)
    label = np.where(rng.random(n) < _sigmoid(logit), "no", "yes")

    header = ["priors_count", "juv_count", "charge_degree", "length_of_stay",
              "sex", "race", "age_cat", "recidivism"]
    rows = zip(priors.astype(int), juvenile, degree,
               length_of_stay.astype(int), sex, race, age, label)
    schema = {
        "attributes": [
            {"name": "priors_count", "kind": "numeric"},
            {"name": "juv_count", "kind": "numeric"},
            {"name": "charge_degree", "kind": "categorical"},
            {"name": "length_of_stay", "kind": "numeric"},
            {"name": "sex", "kind": "categorical"},
            {"name": "race", "kind": "categorical"},
            {"name": "age_cat", "kind": "categorical"},
        ],
        "protected": ["sex", "race", "age_cat"],
        "label_column": "recidivism",
        "favorable_value": "no",
    }
    return header, rows, schema


def write(out_dir, name, header, rows, schema):
    with open(out_dir / f"{name}.csv", "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow(row)
    with open(out_dir / f"{name}.schema.json", "w") as f:
        json.dump(schema, f, indent=2)
        f.write("\n")


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--out", default=str(
        pathlib.Path(__file__).resolve().parent.parent / "data"))
    parser.add_argument("--seed", type=int, default=20240917)
    args = parser.parse_args()
    out = pathlib.Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(args.seed)
    write(out, "german_synth", *german(rng))
    write(out, "compas_synth", *compas(rng))


if __name__ == "__main__":
    main()
