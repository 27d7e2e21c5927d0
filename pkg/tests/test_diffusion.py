import numpy as np
import pytest

from flexmimo.nn import DenseNet
from flexmimo.rng import OPTIMIZER, RngStream
from flexmimo.trajectory import TOTAL_EE, is_feasible, tiny_instance
from flexmimo.trajectory.diffusion import (_SAMPLE_BLOCK, DiffusionConfig, denoiser_init, diffusion_optimize,
                                           diffusion_sample, diffusion_train, forward_noise, from_normalized,
                                           to_normalized)


def zero_net(dim, cond_dim, cfg):
    net = denoiser_init(dim, cond_dim, cfg)
    for p in net.params:
        p[...] = 0.0
    return net


class TestSchedule:
    def test_endpoints(self):
        ab = DiffusionConfig(denoise_steps=20, alpha_bar_end=0.02).alpha_bars()
        assert ab.shape == (21,) and ab[0] == 1.0 and ab[-1] == pytest.approx(0.02)
        assert np.all(np.diff(ab) < 0)

    def test_t0_is_identity(self):
        x = np.random.default_rng(0).normal(size=(5, 3))
        eps = np.random.default_rng(1).normal(size=(5, 3))
        assert np.array_equal(forward_noise(x, 0, eps, DiffusionConfig()), x)

    @pytest.mark.parametrize("kw", [dict(denoise_steps=0), dict(alpha_bar_end=0.0), dict(alpha_bar_end=1.0),
                                    dict(schedule="cosine"), dict(elite_fraction=0.0)])
    def test_bad_config(self, kw):
        with pytest.raises(ValueError):
            DiffusionConfig(**kw)


class TestSampler:
    def test_two_step_closed_form(self):
        cfg = DiffusionConfig(denoise_steps=2, alpha_bar_end=0.3)
        net = zero_net(3, 0, cfg)
        out = diffusion_sample(net, cfg, 4, seed=9, noise_scale=0.0)
        x_T = RngStream(9, OPTIMIZER).generator(_SAMPLE_BLOCK).standard_normal((4, 3))
        assert np.allclose(out, x_T / np.sqrt(0.3), rtol=1e-12)

    def test_empty_request(self):
        cfg = DiffusionConfig()
        assert diffusion_sample(zero_net(2, 0, cfg), cfg, 0).shape == (0, 2)

    def test_deterministic(self):
        cfg = DiffusionConfig(hidden=(8,))
        net = denoiser_init(2, 1, cfg)
        a = diffusion_sample(net, cfg, 10, seed=3, condition=[0.5])
        b = diffusion_sample(net, cfg, 10, seed=3, condition=[0.5])
        assert np.array_equal(a, b)
        assert not np.array_equal(a, diffusion_sample(net, cfg, 10, seed=4, condition=[0.5]))


class TestTraining:
    def test_point_mass_recovered(self):
        prob = tiny_instance(0, steps=1)
        target = np.array([[[14.0, 6.0]]])
        x = to_normalized(target, prob).reshape(1, -1)
        cfg = DiffusionConfig(train_epochs=1500, lr=3e-3)
        net, losses = diffusion_train(x, [1.0], cfg)
        assert losses[199] < losses[0]
        z = diffusion_sample(net, cfg, 1000, seed=1)
        wps = from_normalized(z.reshape((-1,) + prob.shape), prob)
        err = np.linalg.norm(wps.mean(axis=0) - target)
        assert err <= 0.1 * prob.scene.region_size

    def test_normalisation_roundtrip(self):
        prob = tiny_instance(2)
        wp = np.random.default_rng(0).uniform(0, 20, (6,) + prob.shape)
        assert np.allclose(from_normalized(to_normalized(wp, prob), prob), wp, rtol=0, atol=1e-12)

    def test_bad_weights(self):
        with pytest.raises(ValueError):
            diffusion_train(np.zeros((2, 2)), [0.0, 0.0], DiffusionConfig())
        with pytest.raises(ValueError):
            diffusion_train(np.zeros((2, 2)), [1.0], DiffusionConfig())
        with pytest.raises(ValueError):
            diffusion_train(np.zeros((0, 2)), [], DiffusionConfig())

    def test_continues_from_state(self):
        cfg = DiffusionConfig(hidden=(8,), train_epochs=5)
        net, _ = diffusion_train(np.ones((3, 2)), np.ones(3), cfg)
        before = [p.copy() for p in net.params]
        net2, _ = diffusion_train(np.ones((3, 2)), np.ones(3), cfg, net=net)
        assert net2 is net and any(not np.array_equal(a, b) for a, b in zip(before, net.params))
        assert isinstance(net, DenseNet)


class TestOptimizer:
    CFG = DiffusionConfig(outer_iterations=6, samples_per_iteration=32, train_epochs=40, hidden=(32, 32))

    def test_report(self):
        prob = tiny_instance(1)
        rep = diffusion_optimize(prob, self.CFG)
        assert rep.evaluations == 6 * 32
        assert len(rep.curve) == 6
        assert np.all(np.diff(rep.curve) >= 0)
        assert is_feasible(rep.best_waypoints, prob)
        assert len(rep.history["loss"]) == 5

    def test_deterministic(self):
        prob = tiny_instance(3, objective=TOTAL_EE)
        a, b = diffusion_optimize(prob, self.CFG), diffusion_optimize(prob, self.CFG)
        assert a.curve == b.curve and np.array_equal(a.best_waypoints, b.best_waypoints)
