"""Fixtures and a seeded corpus generator.

Fixtures are small hand-written programs, each reproducing one observable
phenomenon: cross-patch static-field pollution, registry pollution, mutation
behind a final reference, intra-class final-field dependency, cross-class
initializer dependency, error/restart handling, and the user reset hook.
Their expected status maps are produced by restart-mode runs and committed
next to the inputs, never hand-typed; ``python -m patchvm.corpus``
regenerates the committed trees.

The generator produces deterministic synthetic programs and patch pools for
oracle-equivalence fuzzing and timing runs: same arguments, byte-identical
corpus tree.
"""

from __future__ import annotations

import hashlib
import random
from dataclasses import dataclass, field
from pathlib import Path

from .classfile import ClassDef, FieldDef, make_method, parse_class, serialize_class
from .errors import ConfigError
from .validator import PatchCandidate, RunConfig, validate_pool
from .pollution import analyze
from .report import (
    build_report,
    classpath_digest,
    normalized_report_text,
    parse_manifest,
)

EXPECTED_REPORT_NAME = "expected.restart.report"


# ---------------------------------------------------------------------------
# Hand-written fixtures

_BUGGY = """\
class Buggy {
  static fn answer(0) {
    const 41
    returnval
  }
}
"""

_BUGGY_FIXED = """\
class Buggy {
  static fn answer(0) {
    const 42
    returnval
  }
}
"""

_BUGGY_WRONG = """\
class Buggy {
  static fn answer(0) {
    const 40
    returnval
  }
}
"""


@dataclass
class FixtureSpec:
    name: str
    tag: str
    files: dict  # relative path -> file text
    reset_hook: str | None = None


def _fixture_specs() -> dict[str, FixtureSpec]:
    specs = {}

    # A patch execution writes a mutable static field that a later patch's
    # test asserts on: the correct final patch is falsified on a shared
    # session but plausible on fresh or reset sessions.
    specs["figure2"] = FixtureSpec(
        "figure2",
        "static-field-write",
        {
            "classpath/Buggy.cls": _BUGGY,
            "classpath/Shared.cls": """\
class Shared {
  static int f
  init {
    const 1
    putstatic Shared.f
    return
  }
}
""",
            "classpath/Suite.cls": """\
class Suite {
  static fn test_answer(0) {
    invokestatic Buggy.answer
    const 42
    eq
    assert
    return
  }
  static fn test_shared(0) {
    getstatic Shared.f
    const 1
    eq
    assert
    return
  }
}
""",
            "tests.manifest": "failing: Suite.test_answer\nSuite.test_shared\n",
            "patches-pool/patch-1/Buggy.cls": _BUGGY_WRONG,
            "patches-pool/patch-2/Buggy.cls": """\
class Buggy {
  static fn answer(0) {
    const 43
    returnval
  }
}
""",
            "patches-pool/patch-3/Buggy.cls": """\
class Buggy {
  static fn answer(0) {
    const 2
    putstatic Shared.f
    const 42
    returnval
  }
}
""",
            "patches-pool/patch-4/Buggy.cls": _BUGGY_FIXED,
        },
    )

    # A patch execution leaves a registry key behind; a later patch's test
    # expects the key to be unset.
    specs["registry"] = FixtureSpec(
        "registry",
        "registry-write",
        {
            "classpath/Buggy.cls": _BUGGY,
            "classpath/Env.cls": """\
class Env {
  static fn mode(0) {
    const "mode"
    sysget
    returnval
  }
}
""",
            "classpath/Suite.cls": """\
class Suite {
  static fn test_answer(0) {
    invokestatic Buggy.answer
    const 42
    eq
    assert
    return
  }
  static fn test_env(0) {
    invokestatic Env.mode
    const ""
    eq
    assert
    return
  }
}
""",
            "tests.manifest": "failing: Suite.test_answer\nSuite.test_env\n",
            "patches-pool/patch-1/Buggy.cls": _BUGGY_WRONG,
            "patches-pool/patch-2/Buggy.cls": """\
class Buggy {
  static fn answer(0) {
    const "mode"
    const "dirty"
    sysset
    const 42
    returnval
  }
}
""",
            "patches-pool/patch-3/Buggy.cls": _BUGGY_FIXED,
        },
    )

    # A static final reference: the reference never changes but the object
    # behind it is mutated by a patch execution.
    specs["finalref"] = FixtureSpec(
        "finalref",
        "final-reference-mutation",
        {
            "classpath/Buggy.cls": _BUGGY,
            "classpath/Table.cls": """\
class Table {
  static final ref rows
  init {
    listnew
    store 0
    load 0
    const 0
    const 10
    listput
    load 0
    const 1
    const 20
    listput
    load 0
    putstatic Table.rows
    return
  }
  static fn head(0) {
    getstatic Table.rows
    const 0
    listget
    returnval
  }
}
""",
            "classpath/Suite.cls": """\
class Suite {
  static fn test_answer(0) {
    invokestatic Buggy.answer
    const 42
    eq
    assert
    return
  }
  static fn test_head(0) {
    invokestatic Table.head
    const 10
    eq
    assert
    return
  }
}
""",
            "tests.manifest": "failing: Suite.test_answer\nSuite.test_head\n",
            "patches-pool/patch-1/Buggy.cls": _BUGGY_WRONG,
            "patches-pool/patch-2/Buggy.cls": """\
class Buggy {
  static fn answer(0) {
    getstatic Table.rows
    const 0
    const 99
    listput
    const 42
    returnval
  }
}
""",
            "patches-pool/patch-3/Buggy.cls": _BUGGY_FIXED,
        },
    )

    # Two final fields of one class where the second is built from the
    # first; re-running the renamed initializer preserves the dependency.
    specs["finalchain"] = FixtureSpec(
        "finalchain",
        "final-field-dependency",
        {
            "classpath/Buggy.cls": _BUGGY,
            "classpath/Chrono.cls": """\
class Chrono {
  static final ref zone
  static final ref calendar
  init {
    listnew
    store 0
    load 0
    const 0
    const 3600
    listput
    load 0
    putstatic Chrono.zone
    listnew
    store 1
    load 1
    const 0
    getstatic Chrono.zone
    listput
    load 1
    putstatic Chrono.calendar
    return
  }
  static fn linked(0) {
    getstatic Chrono.calendar
    const 0
    listget
    getstatic Chrono.zone
    eq
    returnval
  }
}
""",
            "classpath/Suite.cls": """\
class Suite {
  static fn test_answer(0) {
    invokestatic Buggy.answer
    const 42
    eq
    assert
    return
  }
  static fn test_linked(0) {
    invokestatic Chrono.linked
    assert
    return
  }
}
""",
            "tests.manifest": "failing: Suite.test_answer\nSuite.test_linked\n",
            "patches-pool/patch-1/Buggy.cls": _BUGGY_WRONG,
            "patches-pool/patch-2/Buggy.cls": """\
class Buggy {
  static fn answer(0) {
    getstatic Chrono.calendar
    const 0
    const 5
    listput
    const 42
    returnval
  }
}
""",
            "patches-pool/patch-3/Buggy.cls": _BUGGY_FIXED,
        },
    )

    # Cross-class initializer dependency: Basics captures Chrono's instance
    # while initializing. Trigger-order reinitialization keeps them
    # consistent; the debug eager replay (sorted order, guards suspended)
    # breaks the aliasing and falsifies a correct patch.
    specs["initorder"] = FixtureSpec(
        "initorder",
        "initializer-dependency",
        {
            "classpath/Buggy.cls": _BUGGY,
            "classpath/Chrono.cls": """\
class Chrono {
  static final ref instance
  init {
    listnew
    putstatic Chrono.instance
    return
  }
}
""",
            "classpath/Basics.cls": """\
class Basics {
  static final ref captured
  init {
    listnew
    store 0
    load 0
    const 0
    getstatic Chrono.instance
    listput
    load 0
    putstatic Basics.captured
    return
  }
  static fn consistent(0) {
    getstatic Basics.captured
    const 0
    listget
    getstatic Chrono.instance
    eq
    returnval
  }
}
""",
            "classpath/Suite.cls": """\
class Suite {
  static fn test_answer(0) {
    invokestatic Buggy.answer
    const 42
    eq
    assert
    return
  }
  static fn test_consistent(0) {
    invokestatic Basics.consistent
    assert
    return
  }
}
""",
            "tests.manifest": "failing: Suite.test_answer\nSuite.test_consistent\n",
            "patches-pool/patch-1/Buggy.cls": _BUGGY_FIXED,
            "patches-pool/patch-2/Buggy.cls": """\
class Buggy {
  static fn answer(0) {
    const 21
    const 2
    mul
    returnval
  }
}
""",
        },
    )

    # One crashing and one non-terminating patch inside a five-patch pool:
    # the shared-session loop must restart around them.
    specs["crashloop"] = FixtureSpec(
        "crashloop",
        "error-restart",
        {
            "classpath/Main.cls": """\
class Main {
  static fn act(0) {
    const 42
    returnval
  }
}
""",
            "classpath/Suite.cls": """\
class Suite {
  static fn test_act(0) {
    invokestatic Main.act
    const 42
    eq
    assert
    return
  }
}
""",
            "tests.manifest": "Suite.test_act\n",
            "patches-pool/patch-1/Main.cls": """\
class Main {
  static fn act(0) {
    const 41
    returnval
  }
}
""",
            "patches-pool/patch-2/Main.cls": """\
class Main {
  static fn act(0) {
    crashvm
    const 42
    returnval
  }
}
""",
            "patches-pool/patch-3/Main.cls": """\
class Main {
  static fn act(0) {
    const 42
    returnval
  }
}
""",
            "patches-pool/patch-4/Main.cls": """\
class Main {
  static fn act(0) {
    label spin
    jump spin
    const 42
    returnval
  }
}
""",
            "patches-pool/patch-5/Main.cls": """\
class Main {
  static fn act(0) {
    const 21
    const 2
    mul
    returnval
  }
}
""",
        },
    )

    # A user hook that re-primes an external-resource stand-in after each
    # epoch reset. The suite itself is hook-agnostic so all modes agree.
    specs["hooked"] = FixtureSpec(
        "hooked",
        "user-reset-hook",
        {
            "classpath/Env.cls": """\
class Env {
  static fn prime(0) {
    const "env"
    const "ready"
    sysset
    return
  }
}
""",
            "classpath/Main.cls": """\
class Main {
  static fn act(0) {
    const 42
    returnval
  }
}
""",
            "classpath/Suite.cls": """\
class Suite {
  static fn test_act(0) {
    invokestatic Main.act
    const 42
    eq
    assert
    return
  }
}
""",
            "tests.manifest": "Suite.test_act\n",
            "patches-pool/patch-1/Main.cls": """\
class Main {
  static fn act(0) {
    const 41
    returnval
  }
}
""",
            "patches-pool/patch-2/Main.cls": """\
class Main {
  static fn act(0) {
    const 42
    returnval
  }
}
""",
        },
        reset_hook="Env.prime",
    )

    return specs


FIXTURE_SPECS = _fixture_specs()
FIXTURE_NAMES = tuple(FIXTURE_SPECS)

# fixtures whose shared-session run visibly diverges from the oracle
POLLUTION_FIXTURES = ("figure2", "registry", "finalref", "finalchain")


@dataclass
class Fixture:
    name: str
    tag: str
    classes: list[ClassDef]
    tests: list[str]
    failing: list[str]
    pool: list[PatchCandidate]
    reset_hook: str | None = None


def load_fixture(name: str) -> Fixture:
    """Materialize a fixture from its in-package definition."""
    spec = FIXTURE_SPECS[name]
    classes = [
        parse_class(text)
        for path, text in sorted(spec.files.items())
        if path.startswith("classpath/")
    ]
    tests, failing = parse_manifest(spec.files["tests.manifest"])
    pools: dict[str, list[ClassDef]] = {}
    for path, text in sorted(spec.files.items()):
        if not path.startswith("patches-pool/"):
            continue
        patch_id = path.split("/")[1]
        pools.setdefault(patch_id, []).append(parse_class(text))
    pool = [PatchCandidate(pid, defs) for pid, defs in sorted(pools.items())]
    return Fixture(name, spec.tag, classes, tests, failing, pool, spec.reset_hook)


def fixtures_root() -> Path:
    return Path(__file__).parent / "fixtures"


def fixture_dir(name: str) -> Path:
    return fixtures_root() / name


def run_config_for(fixture: Fixture, mode: str, **overrides) -> RunConfig:
    kwargs = dict(mode=mode, failing_tests=list(fixture.failing), reset_hook=fixture.reset_hook)
    kwargs.update(overrides)
    return RunConfig(**kwargs)


# ---------------------------------------------------------------------------
# Seeded generator


@dataclass
class GeneratedCorpus:
    classes: list[ClassDef]
    tests: list[str]
    failing: list[str]
    pool: list[PatchCandidate]
    meta: dict = field(default_factory=dict)


def _derive_rng(seed: int, *parts) -> random.Random:
    key = ":".join(str(p) for p in (seed,) + parts)
    digest = hashlib.sha256(key.encode("utf-8")).digest()
    return random.Random(int.from_bytes(digest[:8], "big"))


def _fill_list_body(length: int):
    # locals: 0 = list under construction, 1 = loop counter
    return [
        ("listnew",),
        ("store", 0),
        ("const", 0),
        ("store", 1),
        ("label", "fill"),
        ("load", 1),
        ("const", length),
        ("lt",),
        ("not",),
        ("jumpif", "filled"),
        ("load", 0),
        ("load", 1),
        ("load", 1),
        ("listput",),
        ("load", 1),
        ("const", 1),
        ("add",),
        ("store", 1),
        ("jump", "fill"),
        ("label", "filled"),
    ]


def _calc_body(mul: int, add: int):
    return (
        ("load", 0),
        ("const", mul),
        ("mul",),
        ("const", add),
        ("add",),
        ("returnval",),
    )


def _calc_body_equiv(mul: int, add: int):
    return (
        ("const", add),
        ("load", 0),
        ("const", mul),
        ("mul",),
        ("add",),
        ("returnval",),
    )


def _replace_method(cls: ClassDef, method_name: str, body) -> ClassDef:
    methods = [
        make_method(m.name, m.kind, m.params, body) if m.name == method_name else m
        for m in cls.methods
    ]
    return ClassDef(cls.name, cls.superclass, list(cls.fields), methods)


def generate_program(
    seed: int,
    n_classes: int,
    n_patches: int,
    pollution_rate: float,
    init_list_len: int | None = None,
    calc_reps: int = 1,
) -> GeneratedCorpus:
    """Deterministic synthetic program + patch pool.

    Every class carries an initializer that builds a list; pollution_rate
    controls how much mutable global state exists and how many patches write
    to it (or to the registry) while their tests execute. ``init_list_len``
    pins the list length (heavier initializers), ``calc_reps`` widens each
    arithmetic test (heavier per-patch work). The unpatched program passes
    every test not marked failing.
    """
    if n_classes < 1 or n_patches < 0:
        raise ConfigError("n_classes must be >= 1 and n_patches >= 0")
    if not 0.0 <= pollution_rate <= 1.0:
        raise ConfigError("pollution_rate must be within [0, 1]")
    if calc_reps < 1:
        raise ConfigError("calc_reps must be >= 1")
    rng = _derive_rng(seed, n_classes, n_patches, pollution_rate, init_list_len, calc_reps)

    n_stateful = round(pollution_rate * n_classes)
    stateful = set(rng.sample(range(n_classes), n_stateful)) if n_stateful else set()

    classes: list[ClassDef] = []
    info = []
    for i in range(n_classes):
        name = f"C{i}"
        length = init_list_len if init_list_len is not None else rng.randrange(4, 28)
        mul = rng.randrange(2, 9)
        add = rng.randrange(1, 50)
        cached = i in stateful and rng.random() < 0.6
        has_const = rng.random() < 0.4
        tagged = rng.random() < 0.3
        superclass = f"C{rng.randrange(i)}" if i > 0 and rng.random() < 0.2 else None

        fields = [FieldDef(f"base{i}", "static", "int", is_final=True)]
        if has_const:
            fields.append(FieldDef(f"magic{i}", "static", "int", True, 100 + i))
        if i in stateful:
            fields.append(FieldDef(f"hits{i}", "static", "int"))
        if cached:
            fields.append(FieldDef(f"cache{i}", "static", "ref", is_final=True))
        if tagged:
            fields.append(FieldDef(f"tag{i}", "instance", "int"))

        init_body = _fill_list_body(length)
        init_body += [
            ("load", 0),
            ("listlen",),
            ("const", 7 * i),
            ("add",),
            ("putstatic", name, f"base{i}"),
        ]
        if cached:
            init_body += [("load", 0), ("putstatic", name, f"cache{i}")]
        init_body.append(("return",))

        methods = [
            make_method("<clinit>", "static", 0, init_body),
            make_method(
                "value",
                "static",
                0,
                (("getstatic", name, f"base{i}"), ("returnval",)),
            ),
            make_method("calc", "static", 1, _calc_body(mul, add)),
        ]
        if i in stateful:
            methods.append(
                make_method(
                    "bump",
                    "static",
                    0,
                    (
                        ("getstatic", name, f"hits{i}"),
                        ("const", 1),
                        ("add",),
                        ("putstatic", name, f"hits{i}"),
                        ("return",),
                    ),
                )
            )
        if cached:
            methods.append(
                make_method(
                    "head",
                    "static",
                    0,
                    (("getstatic", name, f"cache{i}"), ("const", 0), ("listget",), ("returnval",)),
                )
            )
        if tagged:
            methods.append(
                make_method("tagval", "instance", 0, (("load", 0), ("getfield", f"tag{i}"), ("returnval",)))
            )
        classes.append(ClassDef(name, superclass, fields, methods))
        info.append(
            {
                "name": name,
                "length": length,
                "mul": mul,
                "add": add,
                "base": length + 7 * i,
                "stateful": i in stateful,
                "cached": cached,
                "tagged": tagged,
            }
        )

    has_bug = n_patches > 0 and rng.random() < 0.75
    bug_idx = rng.randrange(n_classes) if has_bug else None
    if has_bug:
        ci = info[bug_idx]
        classes[bug_idx] = _replace_method(
            classes[bug_idx], "calc", _calc_body(ci["mul"], ci["add"] + 3)
        )

    # test suite
    suite_methods = []
    tests: list[str] = []
    failing: list[str] = []
    for i, ci in enumerate(info):
        name = ci["name"]
        suite_methods.append(
            make_method(
                f"t_value_{i}",
                "static",
                0,
                (
                    ("invokestatic", name, "value"),
                    ("const", ci["base"]),
                    ("eq",),
                    ("assert",),
                    ("return",),
                ),
            )
        )
        tests.append(f"Suite.t_value_{i}")
        xs = [rng.randrange(2, 12) for _ in range(calc_reps)]
        expected = sum(ci["mul"] * x + ci["add"] for x in xs)
        calc_calls: list = [("const", xs[0]), ("invokestatic", name, "calc")]
        for x in xs[1:]:
            calc_calls += [("const", x), ("invokestatic", name, "calc"), ("add",)]
        suite_methods.append(
            make_method(
                f"t_calc_{i}",
                "static",
                0,
                tuple(calc_calls)
                + (
                    ("const", expected),
                    ("eq",),
                    ("assert",),
                    ("return",),
                ),
            )
        )
        tests.append(f"Suite.t_calc_{i}")
        if i == bug_idx:
            failing.append(f"Suite.t_calc_{i}")
        if ci["tagged"]:
            suite_methods.append(
                make_method(
                    f"t_new_{i}",
                    "static",
                    0,
                    (
                        ("new", name),
                        ("store", 0),
                        ("load", 0),
                        ("invokevirtual", "tagval"),
                        ("const", 0),
                        ("eq",),
                        ("assert",),
                        ("return",),
                    ),
                )
            )
            tests.append(f"Suite.t_new_{i}")
        if ci["stateful"]:
            suite_methods.append(
                make_method(
                    f"t_state_{i}",
                    "static",
                    0,
                    (
                        ("getstatic", name, f"hits{i}"),
                        ("const", 0),
                        ("eq",),
                        ("assert",),
                        ("invokestatic", name, "bump"),
                        ("return",),
                    ),
                )
            )
            tests.append(f"Suite.t_state_{i}")
        if ci["cached"]:
            suite_methods.append(
                make_method(
                    f"t_head_{i}",
                    "static",
                    0,
                    (
                        ("invokestatic", name, "head"),
                        ("const", 0),
                        ("eq",),
                        ("assert",),
                        ("return",),
                    ),
                )
            )
            tests.append(f"Suite.t_head_{i}")
    if stateful:
        suite_methods.append(
            make_method(
                "t_registry",
                "static",
                0,
                (
                    ("const", "g"),
                    ("sysget",),
                    ("const", ""),
                    ("eq",),
                    ("assert",),
                    ("return",),
                ),
            )
        )
        tests.append("Suite.t_registry")
    classes.append(ClassDef("Suite", None, [], suite_methods))

    # patch pool
    pool: list[PatchCandidate] = []
    pollutable = [i for i in range(n_classes) if info[i]["stateful"]]
    for k in range(n_patches):
        roll = rng.random()
        if has_bug and roll < 0.25:
            kind = "fix"
        elif has_bug and roll < 0.45:
            kind = "wrongfix"
        elif roll < 0.45 + pollution_rate * 0.4:
            kind = "poison"
        else:
            kind = "equiv"
        if kind in ("fix", "wrongfix"):
            idx = bug_idx
        elif kind == "poison" and has_bug:
            idx = bug_idx  # keep the write on the path the failing test executes
        else:
            idx = rng.randrange(n_classes)
        ci = info[idx]
        current_add = ci["add"] + 3 if idx == bug_idx else ci["add"]
        if kind == "fix":
            body = _calc_body(ci["mul"], ci["add"])
        elif kind == "wrongfix":
            body = _calc_body(ci["mul"], ci["add"] + rng.randrange(4, 12))
        elif kind == "equiv":
            body = _calc_body_equiv(ci["mul"], current_add)
        else:  # poison
            choices = []
            if pollutable:
                choices.append("hits")
            if any(info[j]["cached"] for j in range(n_classes)):
                choices.append("cache")
            choices.append("registry")
            what = rng.choice(choices)
            if what == "hits":
                j = rng.choice(pollutable)
                prefix = [("const", 13), ("putstatic", f"C{j}", f"hits{j}")]
            elif what == "cache":
                cached_js = [j for j in range(n_classes) if info[j]["cached"]]
                j = rng.choice(cached_js)
                prefix = [
                    ("getstatic", f"C{j}", f"cache{j}"),
                    ("const", 0),
                    ("const", 99),
                    ("listput",),
                ]
            else:
                prefix = [("const", "g"), ("const", "dirty"), ("sysset",)]
            body = tuple(prefix) + _calc_body(ci["mul"], current_add)
        patched = _replace_method(classes[idx], "calc", body)
        pool.append(PatchCandidate(f"patch-{k + 1:03d}", [patched]))

    meta = {"bug_class": f"C{bug_idx}" if has_bug else None, "stateful": sorted(stateful)}
    return GeneratedCorpus(classes, tests, failing, pool, meta)


# ---------------------------------------------------------------------------
# Disk layout


def manifest_text(tests: list[str], failing: list[str]) -> str:
    failing_set = set(failing)
    lines = [("failing: " + t) if t in failing_set else t for t in tests]
    return "\n".join(lines) + "\n"


def write_corpus_tree(
    out_dir: str | Path,
    classes: list[ClassDef],
    tests: list[str],
    failing: list[str],
    pool: list[PatchCandidate],
    expected_restart_report: str | None = None,
):
    out = Path(out_dir)
    (out / "classpath").mkdir(parents=True, exist_ok=True)
    for c in classes:
        (out / "classpath" / f"{c.name}.cls").write_text(serialize_class(c), encoding="utf-8")
    (out / "tests.manifest").write_text(manifest_text(tests, failing), encoding="utf-8")
    pool_dir = out / "patches-pool"
    pool_dir.mkdir(exist_ok=True)
    for cand in pool:
        pdir = pool_dir / cand.patch_id
        pdir.mkdir(exist_ok=True)
        for c in cand.classes:
            (pdir / f"{c.name}.cls").write_text(serialize_class(c), encoding="utf-8")
    if expected_restart_report is not None:
        (out / EXPECTED_REPORT_NAME).write_text(expected_restart_report, encoding="utf-8")


def restart_expectation(
    classes: list[ClassDef],
    tests: list[str],
    failing: list[str],
    pool: list[PatchCandidate],
    reset_hook: str | None = None,
) -> str:
    """Normalized restart-mode report text: the committed oracle output."""
    cfg = RunConfig(mode="restart", failing_tests=list(failing), reset_hook=reset_hook)
    statuses, telemetry = validate_pool(classes, tests, pool, cfg)
    digest = classpath_digest(classes, tests, pool)
    report = build_report(cfg, digest, statuses, telemetry, analyze(classes))
    return normalized_report_text(report)


def generate_pool(
    seed: int,
    n_classes: int,
    n_patches: int,
    pollution_rate: float,
    out_dir: str | Path,
    init_list_len: int | None = None,
) -> Path:
    """Generate a corpus tree on disk, including the committed restart oracle."""
    corpus = generate_program(seed, n_classes, n_patches, pollution_rate, init_list_len)
    expected = restart_expectation(corpus.classes, corpus.tests, corpus.failing, corpus.pool)
    write_corpus_tree(out_dir, corpus.classes, corpus.tests, corpus.failing, corpus.pool, expected)
    return Path(out_dir)


def regenerate_fixture_trees(root: str | Path | None = None):
    """Write every fixture tree plus its restart-mode expectation."""
    root = Path(root) if root is not None else fixtures_root()
    for name, spec in FIXTURE_SPECS.items():
        base = root / name
        for rel, text in sorted(spec.files.items()):
            path = base / rel
            path.parent.mkdir(parents=True, exist_ok=True)
            path.write_text(text, encoding="utf-8")
        fx = load_fixture(name)
        expected = restart_expectation(fx.classes, fx.tests, fx.failing, fx.pool, fx.reset_hook)
        (base / EXPECTED_REPORT_NAME).write_text(expected, encoding="utf-8")


if __name__ == "__main__":
    regenerate_fixture_trees()
    print(f"fixture trees regenerated under {fixtures_root()}")
