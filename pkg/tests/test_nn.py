import numpy as np
import pytest

from flexmimo.nn import (AdamState, adam_step, load_checkpoint, net_backward, net_forward, net_init,
                         save_checkpoint)


def finite_difference_grads(net, x, upstream, h=1e-5):
    grads = []
    for p in net.params:
        g = np.zeros_like(p)
        it = np.nditer(p, flags=["multi_index"])
        for _ in it:
            i = it.multi_index
            old = p[i]
            p[i] = old + h
            up = np.sum(upstream * net_forward(net, x))
            p[i] = old - h
            down = np.sum(upstream * net_forward(net, x))
            p[i] = old
            g[i] = (up - down) / (2 * h)
        grads.append(g)
    return grads


def max_rel_error(a, b):
    num = max(np.max(np.abs(x - y)) for x, y in zip(a, b))
    den = max(np.max(np.abs(y)) for y in b)
    return num / den


class TestInit:
    def test_deterministic(self):
        a, b = net_init((3, 5, 2), "relu", 4), net_init((3, 5, 2), "relu", 4)
        assert all(np.array_equal(x, y) for x, y in zip(a.params, b.params))

    def test_shapes_and_zero_bias(self):
        net = net_init((3, 5, 2), "silu", 0)
        assert [w.shape for w in net.weights] == [(3, 5), (5, 2)]
        assert all(np.all(b == 0) for b in net.biases)
        assert all(np.all(np.abs(w) <= 1 / np.sqrt(w.shape[0])) for w in net.weights)

    def test_errors(self):
        with pytest.raises(ValueError):
            net_init((3,))
        with pytest.raises(ValueError):
            net_init((3, 2), "tanh")


class TestForward:
    def test_zero_weights_gives_bias(self):
        net = net_init((4, 6, 3), "silu", 0)
        for w in net.weights:
            w[:] = 0
        net.biases[-1][:] = [1.0, -2.0, 0.5]
        out = net_forward(net, np.random.default_rng(0).standard_normal((5, 4)))
        assert np.array_equal(out, np.tile([1.0, -2.0, 0.5], (5, 1)))

    def test_identity_layer(self):
        net = net_init((3, 3), "relu", 0)
        net.weights[0][:] = np.eye(3)
        x = np.random.default_rng(1).standard_normal((7, 3))
        assert np.array_equal(net_forward(net, x), x)

    def test_shape_mismatch(self):
        with pytest.raises(ValueError):
            net_forward(net_init((3, 2)), np.zeros((2, 4)))


class TestBackward:
    @pytest.mark.parametrize("seed", range(10))
    def test_matches_finite_differences(self, seed):
        gen = np.random.default_rng(seed)
        act = ("relu", "silu")[seed % 2]
        net = net_init((4, 8, 6, 3), act, seed)  # 109 parameters
        for b in net.biases:
            b[:] = gen.standard_normal(b.shape) * 0.1
        x = gen.standard_normal((6, 4))
        up = gen.standard_normal((6, 3))
        assert max_rel_error(net_backward(net, x, up), finite_difference_grads(net, x, up)) < 1e-4

    def test_zero_upstream(self):
        net = net_init((3, 4, 2), "silu", 1)
        grads = net_backward(net, np.ones((2, 3)), np.zeros((2, 2)))
        assert all(np.all(g == 0) for g in grads)

    def test_linear_scaling(self):
        net = net_init((3, 2), "relu", 2)
        x = np.random.default_rng(3).standard_normal((5, 3))
        up = np.random.default_rng(4).standard_normal((5, 2))
        g1 = net_backward(net, x, up)
        g3 = net_backward(net, x, 3.0 * up)
        assert all(np.allclose(3.0 * a, b, rtol=1e-14) for a, b in zip(g1, g3))

    def test_shape_mismatch(self):
        with pytest.raises(ValueError):
            net_backward(net_init((3, 2)), np.zeros((4, 3)), np.zeros((4, 3)))


class TestAdam:
    def test_zero_gradient_no_change(self):
        p = [np.array([1.0, -2.0])]
        adam_step(AdamState(lr=0.1), p, [np.zeros(2)])
        assert np.array_equal(p[0], [1.0, -2.0])

    def test_first_step_magnitude_is_lr(self):
        p = [np.zeros(3)]
        adam_step(AdamState(lr=0.01), p, [np.array([2.0, -5.0, 0.3])])
        assert np.allclose(p[0], [-0.01, 0.01, -0.01], rtol=1e-6)

    def test_deterministic_and_counter(self):
        def run():
            st = AdamState(lr=0.05)
            p = [np.array([1.0, 2.0])]
            for i in range(10):
                adam_step(st, p, [np.array([np.sin(i), np.cos(i)])])
            return p[0], st.step
        (a, n), (b, _) = run(), run()
        assert np.array_equal(a, b) and n == 10

    def test_shape_mismatch(self):
        with pytest.raises(ValueError):
            adam_step(AdamState(), [np.zeros(2)], [np.zeros(3)])

    def test_bad_hyperparameters(self):
        with pytest.raises(ValueError):
            AdamState(b1=1.0)
        with pytest.raises(ValueError):
            AdamState(lr=0.0)


def test_training_reduces_loss_100x():
    gen = np.random.default_rng(0)
    x = gen.uniform(-1, 1, (64, 2))
    y = (x[:, :1] ** 2 + 0.5 * x[:, 1:] ** 2) - 0.3
    net = net_init((2, 16, 1), "silu", 0)
    opt = AdamState(lr=0.01)

    def loss():
        return float(np.mean((net_forward(net, x) - y) ** 2))

    start = loss()
    for _ in range(500):
        err = net_forward(net, x) - y
        adam_step(opt, net.params, net_backward(net, x, 2 * err / len(x)))
    assert loss() * 100 <= start


def test_checkpoint_roundtrip(tmp_path):
    net = net_init((3, 4, 2), "silu", 7)
    path = tmp_path / "net.bin"
    save_checkpoint(net, path)
    data = path.read_bytes()
    assert data[:6] == b"FLXNN1"
    assert len(data) == 6 + 4 + 3 * 4 + 8 * net.num_params()
    back = load_checkpoint(path, "silu")
    assert back.layer_sizes == (3, 4, 2)
    assert all(np.array_equal(a, b) for a, b in zip(net.params, back.params))
