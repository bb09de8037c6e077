import type { AnalysisRecord, PlaneWindow, RayResponse, SphereValue } from './types'
import type { View } from './tiles'

const SVG_NS = 'http://www.w3.org/2000/svg'

function screenOf(
	win: PlaneWindow,
	tilePx: number,
	view: View,
	w: number,
	h: number,
	x: number,
	y: number,
): [number, number] {
	const scale = tilePx * 2 ** view.zoom
	return [
		w / 2 + ((x - view.cx) * scale) / win.width,
		h / 2 - ((y - view.cy) * scale) / win.height,
	]
}

// Internal-ray polylines over the parameter tiles. Every vertex comes from
// a service sample (λ or μ as served); this layer only maps coordinates to
// pixels.
export class RayOverlay {
	private rays: RayResponse[] = []

	constructor(
		private svg: SVGSVGElement,
		private win: PlaneWindow,
		private tilePx: number,
	) {}

	setData(rays: RayResponse[]): void {
		this.rays = rays
	}

	setWindow(win: PlaneWindow): void {
		this.win = win
	}

	render(view: View, w: number, h: number, mode: 'param' | 'mu'): void {
		this.svg.replaceChildren()
		this.svg.setAttribute('viewBox', `0 0 ${w} ${h}`)
		for (const ray of this.rays) {
			const pts: string[] = []
			for (const s of ray.points) {
				const coord: SphereValue = mode === 'mu' ? s.mu : s.lambda
				if (coord === 'inf') continue
				const [sx, sy] = screenOf(this.win, this.tilePx, view, w, h, coord[0], coord[1])
				pts.push(`${sx},${sy}`)
			}
			if (pts.length < 2) continue
			const line = document.createElementNS(SVG_NS, 'polyline')
			line.setAttribute('points', pts.join(' '))
			line.setAttribute('class', 'ray')
			line.dataset.ray = `${ray.region}:${ray.theta}:${ray.k}`
			this.svg.appendChild(line)
			const landing = ray.landing
			if (landing) {
				const coord = mode === 'mu' ? landing.mu : landing.lambda
				if (coord !== 'inf') {
					const [sx, sy] = screenOf(this.win, this.tilePx, view, w, h, coord[0], coord[1])
					const dot = document.createElementNS(SVG_NS, 'circle')
					dot.setAttribute('cx', String(sx))
					dot.setAttribute('cy', String(sy))
					dot.setAttribute('r', '3')
					dot.setAttribute('class', 'landing')
					this.svg.appendChild(dot)
				}
			}
		}
	}

	clear(): void {
		this.rays = []
		this.svg.replaceChildren()
	}
}

// Distinguished points of the selected member over the dynamical tiles:
// the fixed root, the pole, the free critical point, and the type ±1
// pseudo-fixed points, all taken from the analysis record.
export class MarkerOverlay {
	private record: AnalysisRecord | null = null

	constructor(
		private svg: SVGSVGElement,
		private win: PlaneWindow,
		private tilePx: number,
	) {}

	setData(record: AnalysisRecord | null): void {
		this.record = record
	}

	render(view: View, w: number, h: number): void {
		this.svg.replaceChildren()
		this.svg.setAttribute('viewBox', `0 0 ${w} ${h}`)
		if (!this.record) return
		const put = (v: SphereValue | undefined, cls: string, label: string) => {
			if (!v || v === 'inf') return
			const [sx, sy] = screenOf(this.win, this.tilePx, view, w, h, v[0], v[1])
			if (sx < -20 || sx > w + 20 || sy < -20 || sy > h + 20) return
			const g = document.createElementNS(SVG_NS, 'g')
			g.setAttribute('class', `marker ${cls}`)
			g.setAttribute('transform', `translate(${sx},${sy})`)
			const dot = document.createElementNS(SVG_NS, 'circle')
			dot.setAttribute('r', '4')
			g.appendChild(dot)
			const text = document.createElementNS(SVG_NS, 'text')
			text.setAttribute('x', '6')
			text.setAttribute('y', '-6')
			text.textContent = label
			g.appendChild(text)
			this.svg.appendChild(g)
		}
		put([1, 0], 'root', 'w=1')
		put(this.record.pole, 'pole', 'B')
		put(this.record.free_critical, 'critical', 'C')
		for (const p of this.record.multipliers.pseudo) {
			if (p.sigma === 1 || p.sigma === -1) {
				put(p.w_star, 'pseudo', `σ=${p.sigma}`)
			}
		}
	}

	clear(): void {
		this.record = null
		this.svg.replaceChildren()
	}
}
