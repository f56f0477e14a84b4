import init, { relaxDisk, normalFormRay, hedgehogEnergy } from "./pkg/relaxlab_web.js";

const $ = (id) => document.getElementById(id);

function report(el, f) {
  el.classList.remove("err");
  try {
    f();
  } catch (e) {
    el.classList.add("err");
    el.textContent = String(e.message ?? e);
  }
}

// white at |u| = 0, dark blue at |u| = 1
function shade(m) {
  const v = Math.max(0, Math.min(1, m));
  return `rgb(${Math.round(255 - 215 * v)},${Math.round(255 - 175 * v)},${Math.round(255 - 75 * v)})`;
}

function drawDisk(r) {
  const c = $("disk");
  const g = c.getContext("2d");
  g.clearRect(0, 0, c.width, c.height);
  const sx = c.width / r.nx;
  const sy = c.height / r.ny;
  for (let j = 0; j < r.ny; j++) {
    for (let i = 0; i < r.nx; i++) {
      const m = r.modulus[j * r.nx + i];
      if (m === null) continue;
      g.fillStyle = shade(m);
      // first grid axis is drawn upwards
      g.fillRect(i * sx, c.height - (j + 1) * sy, Math.ceil(sx), Math.ceil(sy));
    }
  }
}

function relax() {
  const eps = Number($("eps").value);
  const cells = Number($("cells").value);
  const out = $("disk-out");
  out.textContent = "relaxing...";
  setTimeout(() => report(out, () => {
    const t = performance.now();
    const r = JSON.parse(relaxDisk(eps, cells));
    drawDisk(r);
    out.textContent = [
      `eps          ${r.eps}`,
      `h            ${r.h.toFixed(4)}`,
      `energy       ${r.energy.toFixed(5)}`,
      `  dirichlet  ${r.dirichlet.toFixed(5)}`,
      `  potential  ${r.potential.toFixed(5)}`,
      `core radius  ${r.core_radius.toFixed(3)}`,
      `iterations   ${r.iterations}${r.converged ? "" : " (not converged)"}`,
      `time         ${(performance.now() - t).toFixed(0)} ms`,
    ].join("\n");
  }), 10);
}

function plotRay(r) {
  const c = $("ray-plot");
  const g = c.getContext("2d");
  const pad = 36;
  g.clearRect(0, 0, c.width, c.height);
  const ymax = Math.max(...r.f, ...r.quadratic, ...r.stiffness.map((s) => s * r.delta * r.delta)) * 1.05;
  const x = (t) => pad + ((t + r.delta) / (2 * r.delta)) * (c.width - 2 * pad);
  const y = (v) => c.height - pad - (v / ymax) * (c.height - 2 * pad);
  g.strokeStyle = "#999";
  g.strokeRect(pad, pad, c.width - 2 * pad, c.height - 2 * pad);
  g.fillStyle = "#333";
  g.fillText(`t = ${(-r.delta).toFixed(3)}`, pad, c.height - 12);
  g.fillText(`t = ${r.delta.toFixed(3)}`, c.width - pad - 50, c.height - 12);
  g.fillText(`${ymax.toFixed(3)}`, 4, pad + 4);
  const line = (ys, color, width, dash) => {
    g.beginPath();
    g.setLineDash(dash);
    g.strokeStyle = color;
    g.lineWidth = width;
    r.t.forEach((t, i) => (i ? g.lineTo(x(t), y(ys[i])) : g.moveTo(x(t), y(ys[i]))));
    g.stroke();
  };
  line(r.f, "#d62728", 5, []);
  line(r.quadratic, "#1f77b4", 2, []);
  // stiffness scaled by δ² to share the axis with f
  line(r.stiffness.map((s) => s * r.delta * r.delta), "#2ca02c", 1.5, [5, 4]);
  g.setLineDash([]);
}

function trace() {
  const out = $("ray-out");
  report(out, () => {
    const r = JSON.parse(normalFormRay($("pot").value, 161));
    plotRay(r);
    const gap = Math.max(...r.f.map((f, i) => Math.abs(f - r.quadratic[i])));
    out.textContent = [
      `tube radius δ        ${r.delta.toFixed(4)}`,
      `max |f − z⊥·A z⊥|    ${gap.toExponential(2)}`,
      `min ν·A ν            ${Math.min(...r.stiffness).toFixed(4)}`,
      "",
      "red: f   blue: z⊥·A z⊥   green dashed: δ² ν·A ν",
    ].join("\n");
  });
}

function hedgehog() {
  const out = $("hh-out");
  report(out, () => {
    const r = JSON.parse(hedgehogEnergy(Number($("hh-cells").value)));
    out.textContent = `h = ${r.h.toFixed(4)}:  ½∫|∇u|² = ${r.dirichlet.toFixed(4)},  ratio to 4π = ${r.ratio.toFixed(4)}`;
  });
}

await init();
$("eps").addEventListener("input", () => ($("eps-val").textContent = Number($("eps").value).toFixed(2)));
$("relax").addEventListener("click", relax);
$("ray").addEventListener("click", trace);
$("hh").addEventListener("click", hedgehog);
relax();
trace();
