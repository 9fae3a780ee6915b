import io
import threading

import pytest

from conftest import BETA_A_16, EXAMPLE_A, EXAMPLE_B
from knotlock import cli, wire
from knotlock.harness import ChallengeServer, PartyConfig, emit_config
from knotlock.protocol import Reason

ALICE = PartyConfig(twists=EXAMPLE_A.twists, primes=EXAMPLE_A.primes, seed=2)
BOB = PartyConfig(twists=EXAMPLE_B.twists, primes=EXAMPLE_B.primes, seed=2)


def run(*argv):
    out = io.StringIO()
    code = cli.main(list(argv), out=out)
    return code, out.getvalue()


@pytest.fixture
def configs(tmp_path):
    a, b = tmp_path / "alice.cfg", tmp_path / "bob.cfg"
    a.write_text(emit_config(ALICE))
    b.write_text(emit_config(BOB))
    return str(a), str(b)


def test_encode():
    code, out = run("encode", "--primes", "2,3", "--twists", "3,1", "--alpha", "2")
    assert code == 0
    assert out == f"N=2304 M=4 beta={BETA_A_16}\n"


def test_encode_emit():
    code, out = run("encode", "--primes", "2,3", "--twists", "3,1", "--emit")
    assert code == 0
    doc = out.split("\n", 1)[1]
    msg = wire.parse(doc)
    assert msg.carrier.framing == (3, 1)


def test_decode():
    assert run("decode", "--n", "2304", "--alpha", "2") == (0, "(2,3) (3,1)\n")
    code, _ = run("decode", "--n", "24")
    assert code == 1
    assert run("decode", "--n", "abc")[0] == 2


@pytest.mark.parametrize(
    "argv",
    [(), ("encode",), ("encode", "--primes", "2,x", "--twists", "1"), ("frobnicate",), ("verify", "--in", "x")],
)
def test_usage_errors(argv):
    assert run(*argv)[0] == 2


def test_encode_invalid_payload_is_exit_1():
    assert run("encode", "--primes", "4", "--twists", "1")[0] == 1


def test_missing_config_file(tmp_path):
    assert run("challenge", "--config", str(tmp_path / "nope.cfg"))[0] == 2


def test_challenge_respond_verify(configs, tmp_path):
    alice_cfg, bob_cfg = configs
    code, challenge = run("challenge", "--config", alice_cfg, "--seed", "4")
    assert code == 0 and "TYPE CHALLENGE" in challenge
    (tmp_path / "challenge.txt").write_text(challenge)
    code, response = run("respond", "--in", str(tmp_path / "challenge.txt"), "--config", bob_cfg, "--seed", "4")
    assert code == 0 and "TYPE RESPONSE" in response
    (tmp_path / "response.txt").write_text(response)
    code, verdict = run("verify", "--in", str(tmp_path / "response.txt"), "--state", alice_cfg)
    assert (code, verdict) == (0, "%KNOTWIRE 1\nTYPE VERDICT\nVERDICT ACCEPT OK\nEND\n")

    gamma_line = next(line for line in response.splitlines() if line.startswith("GAMMA "))
    tampered = response.replace(gamma_line, f"GAMMA {int(gamma_line.split()[1]) + 1}")
    (tmp_path / "tampered.txt").write_text(tampered)
    code, verdict = run("verify", "--in", str(tmp_path / "tampered.txt"), "--state", alice_cfg)
    assert code == 1
    assert f"VERDICT REJECT {Reason.GAMMA_CHECK_FAILED.value}" in verdict


def test_equiv(tmp_path):
    doc = wire.emit(wire.parse(run("encode", "--primes", "2,3", "--twists", "3,1", "--emit")[1].split("\n", 1)[1]))
    (tmp_path / "share.txt").write_text(doc)
    code, out = run("equiv", "--in", str(tmp_path / "share.txt"), "--moves", "12", "--seed", "9")
    assert code == 0
    before, after = wire.parse(doc), wire.parse(out)
    assert after.beta == before.beta
    assert sum(v or 0 for v in after.carrier.framing) == 4
    (tmp_path / "verdict.txt").write_text("%KNOTWIRE 1\nTYPE VERDICT\nVERDICT ACCEPT OK\nEND\n")
    assert run("equiv", "--in", str(tmp_path / "verdict.txt"), "--moves", "1")[0] == 2


def test_session(configs, tmp_path):
    alice_cfg, bob_cfg = configs
    code, out = run("session", "--alice", alice_cfg, "--bob", bob_cfg, "--seed", "1")
    assert code == 0
    assert out.count("# A->B") == 2 and out.count("# B->A") == 1
    assert out.rstrip().endswith("END")
    bad = tmp_path / "bad.cfg"
    bad.write_text(emit_config(PartyConfig(twists=(1,), primes=(2,))))
    code, out = run("session", "--alice", alice_cfg, "--bob", str(bad))
    assert code == 1 and "FAILED PrimeCollision" in out


def test_serve_and_connect(configs, monkeypatch):
    alice_cfg, bob_cfg = configs
    probe = ChallengeServer(("127.0.0.1", 0), ALICE)
    port = probe.server_address[1]
    probe.server_close()
    addr = f"127.0.0.1:{port}"

    served = {}

    def serve():
        served["result"] = run("serve", "--listen", addr, "--config", alice_cfg, "--seed", "6", "--sessions", "1")

    thread = threading.Thread(target=serve, daemon=True)
    thread.start()
    monkeypatch.setenv(cli.ADDR_ENV, addr)
    for _ in range(200):
        code, out = run("connect", "--config", bob_cfg, "--seed", "6")
        if code != 3:
            break
        thread.join(0.05)
    thread.join(30)
    assert code == 0
    assert served["result"] == (0, out)
    _, loop_out = run("session", "--alice", alice_cfg, "--bob", bob_cfg, "--seed", "6")
    assert loop_out == out


def test_connect_without_address(configs, monkeypatch):
    monkeypatch.delenv(cli.ADDR_ENV, raising=False)
    assert run("connect", "--config", configs[1])[0] == 2


def test_connect_refused(configs):
    probe = ChallengeServer(("127.0.0.1", 0), ALICE)
    port = probe.server_address[1]
    probe.server_close()
    assert run("connect", "--to", f"127.0.0.1:{port}", "--config", configs[1])[0] == 3
