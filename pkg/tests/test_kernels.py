import subprocess
import sys
import textwrap


def test_pure_python_fallback_selectable():
    """WEBHARVEST_PURE=1 must select the Python kernels and produce the same
    predictions as the compiled path."""
    script = textwrap.dedent("""
        import json, os, sys
        sys.path.insert(0, "tests")
        import lid_corpus
        from webharvest import kernels, lid

        corpus = lid_corpus.build_corpus(per_class=40, rng_seed=3)
        model = lid.train(corpus, order=3)
        probes = [
            "Hüt isch es würkli guet gsi",
            "the weather was nice today",
            "een mooie dag vandaag weer",
        ]
        result = {
            "impl": kernels.IMPLEMENTATION,
            "probs": [lid.predict(model, p) for p in probes],
        }
        print(json.dumps(result))
    """)
    import json
    import os

    env_pure = dict(os.environ, WEBHARVEST_PURE="1")
    pure = json.loads(subprocess.run(
        [sys.executable, "-c", script], capture_output=True, text=True,
        cwd=".", env=env_pure, check=True,
    ).stdout)
    assert pure["impl"] == "python"

    env_default = {k: v for k, v in os.environ.items() if k != "WEBHARVEST_PURE"}
    default = json.loads(subprocess.run(
        [sys.executable, "-c", script], capture_output=True, text=True,
        cwd=".", env=env_default, check=True,
    ).stdout)

    for a, b in zip(pure["probs"], default["probs"]):
        assert set(a) == set(b)
        for cls in a:
            assert abs(a[cls] - b[cls]) < 1e-12
