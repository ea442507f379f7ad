"""Freeze everything but the motion path (estimator + offset codec + warp +
refiner) and train it with a direct prediction-distortion loss.  Answers
whether the compensation architecture can learn per-clip translation at all."""
import numpy as np, torch
from fvcodec import frames, training, bitstream as bs
from fvcodec.model import ReferenceBuffer

model, _ = training.load_checkpoint("/root/pkg/.calib/lam1024_n512.pt")
train_ds = frames.make_synthetic_dataset(512, 64, "translate", seed=0, clip_len=4)
test_ds = frames.make_synthetic_dataset(4, 64, "translate", seed=99, clip_len=4)

motion_params = (list(model.compensation.parameters())
                 + list(model.offset_codec.parameters()))
motion_ids = {id(p) for p in motion_params}
for p in model.parameters():
    p.requires_grad_(id(p) in motion_ids)
opt = torch.optim.Adam(motion_params, lr=2e-4)
rng = np.random.default_rng(7)
gen = torch.Generator().manual_seed(7)
model.train()

from fvcodec.metrics import psnr

def eval_pred(tag):
    model.eval()
    preds, gains, bits = [], [], []
    with torch.no_grad():
        for clip in test_ds.clips:
            x = [bs.frame_to_tensor(f) for f in clip.frames]
            xhat = model.encode_iframe_bytes(x[0])["x_hat"].clamp(0, 1)
            buf = ReferenceBuffer(); buf.push(model.extract(xhat))
            for t in range(1, len(x)):
                out = model.encode_pframe_bytes(x[t], buf.references())
                pf = model.reconstruct(out["f_pred"]).clamp(0, 1)
                p = psnr(clip.frames[t], bs.tensor_to_frame(pf))
                preds.append(p)
                gains.append(p - psnr(clip.frames[t], clip.frames[t - 1]))
                bits.append(8 * (len(out["payloads"][0]) + len(out["payloads"][1])))
                buf.push(model.extract(out["x_hat"].clamp(0, 1)))
    print("%s pred %.2f gain %.3f bits_o %.0f" % (tag, np.mean(preds), np.mean(gains), np.mean(bits)), flush=True)
    model.train()

eval_pred("step0")
for step in range(600):
    idx = rng.integers(0, len(train_ds), size=4)
    batch = torch.from_numpy(np.stack(
        [np.stack(train_ds.clips[int(i)].frames).transpose(0, 3, 1, 2) for i in idx])).float()
    with torch.no_grad():
        f_prev = model.extract(batch[:, 0])
    loss_acc = 0.0
    for t in range(1, batch.shape[1]):
        x_t = batch[:, t]
        f_t = model.extract(x_t).detach()
        offsets = model.compensation.estimate(f_t, f_prev)
        offsets_hat, _, bits_o = model.offset_codec(offsets, "train", gen)
        f_pred = model.compensation.compensate(f_prev, offsets_hat)
        x_pred = model.reconstruct(f_pred)
        mse = torch.mean((x_pred - x_t) ** 2)
        loss_acc = loss_acc + 1024.0 * mse + bits_o / (4 * 64 * 64)
        with torch.no_grad():
            f_prev = model.extract(x_t)
    loss = loss_acc / (batch.shape[1] - 1)
    opt.zero_grad(); loss.backward(); opt.step()
    if (step + 1) % 100 == 0:
        print("step %d loss %.4f" % (step + 1, float(loss)), flush=True)
        eval_pred("step%d" % (step + 1))
