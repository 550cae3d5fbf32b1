"""Experiment configuration from INI-style files merged with CLI overrides.

File layout (all sections optional):

.. code-block:: ini

    [experiment]
    name = demo
    env = env1          ; preset id, unless an [env] section is given
    horizon = 10000
    runs = 100
    seed = 0
    threads = 1
    trace = aggregate   ; or full

    [master]
    c1 = 0.5
    c2 = 10
    exploration_only_risks = false

    [env]               ; custom environment instead of a preset
    kind = quadrant     ; or linear
    means = 0.1,0.5,0.7,0.45; 0.8,0.1,0.3,0.6
    d = 4
    ; kind = linear uses: coeffs = <k rows of d+1 reals>, noise_sd = 1.0

    [learner.1]
    kind = linucb
    alpha = 1.0
    ridge = 1.0

    [learner.2]
    kind = epsgreedy

Command-line flags always win over file values. Any malformed or unknown
key raises :class:`ConfigError`, which the CLI maps to exit code 2.
"""

from __future__ import annotations

import configparser
import os

from .harness import EnvSpec, ExperimentConfig, LearnerSpec
from .master import MasterConfig


class ConfigError(Exception):
    """Invalid experiment configuration (file contents or flag values)."""


_EXPERIMENT_KEYS = {"name", "env", "horizon", "runs", "seed", "threads", "trace"}
_MASTER_KEYS = {"c1", "c2", "exploration_only_risks"}
_ENV_KEYS = {"kind", "means", "coeffs", "noise_sd", "d"}
_PRESETS = ("env1", "env2")


def _parse_rows(text: str, what: str) -> tuple:
    """Rows of reals: entries comma-separated, rows split on ';'."""
    rows = []
    for chunk in text.split(";"):
        chunk = chunk.strip()
        if not chunk:
            continue
        try:
            rows.append(tuple(float(v) for v in chunk.split(",")))
        except ValueError:
            raise ConfigError(f"{what}: could not parse row {chunk!r} as comma-separated reals") from None
    if not rows:
        raise ConfigError(f"{what}: no rows given")
    if len({len(r) for r in rows}) != 1:
        raise ConfigError(f"{what}: rows have unequal lengths")
    return tuple(rows)


def _get(parser_section, key: str, convert, what: str):
    try:
        return convert(parser_section[key])
    except (ValueError, TypeError):
        raise ConfigError(f"{what}.{key}: could not parse {parser_section[key]!r}") from None


def _bool(text: str) -> bool:
    lowered = text.strip().lower()
    if lowered in ("1", "true", "yes", "on"):
        return True
    if lowered in ("0", "false", "no", "off"):
        return False
    raise ValueError(text)


def load_config_file(path: str) -> dict:
    """Parse a config file into plain dicts; raises ConfigError on any problem."""
    if not os.path.exists(path):
        raise ConfigError(f"config file not found: {path}")
    parser = configparser.ConfigParser(inline_comment_prefixes=(";", "#"))
    try:
        with open(path, "r", encoding="utf-8") as fh:
            parser.read_file(fh)
    except configparser.Error as exc:
        raise ConfigError(f"could not parse {path}: {exc}") from None

    data: dict = {"experiment": {}, "master": {}, "env": None, "learners": None}
    learner_sections = []
    for section in parser.sections():
        if section == "experiment":
            for key in parser[section]:
                if key not in _EXPERIMENT_KEYS:
                    raise ConfigError(f"unknown key 'experiment.{key}'")
            sec = parser[section]
            for key, convert in (
                ("name", str),
                ("env", str),
                ("horizon", int),
                ("runs", int),
                ("seed", int),
                ("threads", int),
                ("trace", str),
            ):
                if key in sec:
                    data["experiment"][key] = _get(sec, key, convert, "experiment")
        elif section == "master":
            for key in parser[section]:
                if key not in _MASTER_KEYS:
                    raise ConfigError(f"unknown key 'master.{key}'")
            sec = parser[section]
            for key, convert in (("c1", float), ("c2", float), ("exploration_only_risks", _bool)):
                if key in sec:
                    data["master"][key] = _get(sec, key, convert, "master")
        elif section == "env":
            sec = parser[section]
            for key in sec:
                if key not in _ENV_KEYS:
                    raise ConfigError(f"unknown key 'env.{key}'")
            env: dict = {"kind": sec.get("kind", "env1")}
            if "means" in sec:
                env["means"] = _parse_rows(sec["means"], "env.means")
            if "coeffs" in sec:
                env["coeffs"] = _parse_rows(sec["coeffs"], "env.coeffs")
            if "noise_sd" in sec:
                env["noise_sd"] = _get(sec, "noise_sd", float, "env")
            if "d" in sec:
                env["d"] = _get(sec, "d", int, "env")
            data["env"] = env
        elif section.startswith("learner."):
            try:
                index = int(section.split(".", 1)[1])
            except ValueError:
                raise ConfigError(f"bad learner section name [{section}]; use [learner.1], [learner.2], ...") from None
            sec = parser[section]
            if "kind" not in sec:
                raise ConfigError(f"[{section}] needs a 'kind' key")
            params = {}
            for key in sec:
                if key == "kind":
                    continue
                params[key] = _get(sec, key, float, section)
            learner_sections.append((index, LearnerSpec(sec["kind"], params)))
        else:
            raise ConfigError(f"unknown section [{section}]")
    if learner_sections:
        learner_sections.sort(key=lambda pair: pair[0])
        data["learners"] = [spec for _, spec in learner_sections]
    return data


def _env_spec_from_file(env: dict) -> EnvSpec:
    kind = env["kind"]
    if kind in _PRESETS:
        return EnvSpec(env_id=kind)
    if kind == "quadrant":
        if "means" not in env:
            raise ConfigError("env.kind = quadrant needs env.means")
        return EnvSpec(env_id="quadrant", means=env["means"], d=env.get("d", 4))
    if kind == "linear":
        if "coeffs" not in env:
            raise ConfigError("env.kind = linear needs env.coeffs")
        return EnvSpec(env_id="linear", coeffs=env["coeffs"], noise_sd=env.get("noise_sd", 1.0))
    raise ConfigError(f"unknown env.kind {kind!r} (known: env1, env2, quadrant, linear)")


def parse_learners_flag(text: str) -> list:
    """'--learners linucb,epsgreedy' -> LearnerSpecs with default parameters."""
    kinds = [part.strip() for part in text.split(",") if part.strip()]
    if not kinds:
        raise ConfigError("--learners given but no learner kinds found")
    return [LearnerSpec(kind) for kind in kinds]


def resolve_config(file_path: str | None, overrides: dict) -> ExperimentConfig:
    """Build a validated ExperimentConfig from defaults <- file <- CLI overrides.

    ``overrides`` maps ExperimentConfig-level names (env, learners, horizon,
    runs, seed, threads, c1, c2, name, trace) to values, with None meaning
    "not given on the command line".
    """
    data = load_config_file(file_path) if file_path else {"experiment": {}, "master": {}, "env": None, "learners": None}

    exp = data["experiment"]
    master = MasterConfig()
    if "c1" in data["master"]:
        master.c1 = data["master"]["c1"]
    if "c2" in data["master"]:
        master.c2 = data["master"]["c2"]
    if "exploration_only_risks" in data["master"]:
        master.exploration_only_risks = data["master"]["exploration_only_risks"]
    if overrides.get("c1") is not None:
        master.c1 = overrides["c1"]
    if overrides.get("c2") is not None:
        master.c2 = overrides["c2"]

    if overrides.get("env") is not None:
        env_id = overrides["env"]
        if env_id not in _PRESETS:
            raise ConfigError(f"--env takes a preset id ({', '.join(_PRESETS)}); custom environments go in the config file")
        env_spec = EnvSpec(env_id=env_id)
    elif data["env"] is not None:
        env_spec = _env_spec_from_file(data["env"])
    elif "env" in exp:
        if exp["env"] not in _PRESETS:
            raise ConfigError(f"experiment.env must be a preset id ({', '.join(_PRESETS)})")
        env_spec = EnvSpec(env_id=exp["env"])
    else:
        env_spec = EnvSpec(env_id="env1")

    if overrides.get("learners") is not None:
        learners = parse_learners_flag(overrides["learners"])
    elif data["learners"] is not None:
        learners = data["learners"]
    else:
        learners = [LearnerSpec("linucb"), LearnerSpec("epsgreedy")]

    cfg = ExperimentConfig(env=env_spec, learners=learners, master=master)
    for key in ("name", "horizon", "runs", "seed", "threads", "trace"):
        if key in exp:
            setattr(cfg, key, exp[key])
        if overrides.get(key) is not None:
            setattr(cfg, key, overrides[key])
    try:
        cfg.validate()
    except (ValueError, TypeError) as exc:
        raise ConfigError(str(exc)) from None
    return cfg
