"""Scale-0.002 from-scratch run at lam=1024 with a T6-style gain eval after
every stage, to measure gain-vs-budget slope and where gain peaks."""
import time, numpy as np, torch
from fvcodec import frames, training, bitstream as bs
from fvcodec.model import VideoCodec, CodecConfig, ReferenceBuffer
from fvcodec.metrics import psnr

t0 = time.time()
train_ds = frames.make_synthetic_dataset(512, 64, "translate", seed=0, clip_len=4)
test_ds = frames.make_synthetic_dataset(4, 64, "translate", seed=99, clip_len=4)
sched = training.Schedule(batch_size=4, scale_factor=0.002, stage1_lr=2e-4, stage2a_lr=1e-4)
loss_cfg = training.RDLossConfig(lam=1024.0)

def evaluate(model, tag):
    model.eval()
    preds, copies, recs, gains = [], [], [], []
    with torch.no_grad():
        for clip in test_ds.clips:
            x = [bs.frame_to_tensor(f) for f in clip.frames]
            xhat = model.encode_iframe_bytes(x[0])["x_hat"].clamp(0, 1)
            buf = ReferenceBuffer(); buf.push(model.extract(xhat))
            for t in range(1, len(x)):
                out = model.encode_pframe_bytes(x[t], buf.references())
                pf = model.reconstruct(out["f_pred"]).clamp(0, 1)
                p_pred = psnr(clip.frames[t], bs.tensor_to_frame(pf))
                p_copy = psnr(clip.frames[t], clip.frames[t - 1])
                preds.append(p_pred); copies.append(p_copy)
                recs.append(psnr(clip.frames[t], bs.tensor_to_frame(out["x_hat"].clamp(0, 1))))
                gains.append(p_pred - p_copy)
                buf.push(model.extract(out["x_hat"].clamp(0, 1)))
    print("%s: pred %.2f copy %.2f rec %.2f gain %.3f elapsed %.0f" %
          (tag, np.mean(preds), np.mean(copies), np.mean(recs), np.mean(gains), time.time() - t0), flush=True)

torch.manual_seed(3)
model = VideoCodec(CodecConfig())
rng = np.random.default_rng(3)
for stage in ("1", "2a", "2b"):
    res = training.train_stage(model, train_ds, sched, stage, rng, loss_cfg,
                               model_id=2, log_every=200)
    training.save_checkpoint(res.checkpoint, "/root/pkg/.calib/lam1024_s002_stage%s.pt" % stage)
    evaluate(model, "after stage " + stage)
print("total time", time.time() - t0)
