import { describe, expect, it } from 'vitest'

import { MarkerOverlay, RayOverlay } from '../src/overlays'
import { META, RAY_SHORT, RECORD_CENTER } from './fixtures'
import type { RayResponse } from '../src/types'

function svg(): SVGSVGElement {
	return document.createElementNS('http://www.w3.org/2000/svg', 'svg')
}

const VIEW = { cx: 0, cy: 0, zoom: 0 }

describe('RayOverlay', () => {
	it('draws one polyline per ray plus its landing dot', () => {
		const el = svg()
		const overlay = new RayOverlay(el, META.planes.param, META.tile_px)
		overlay.setData([RAY_SHORT])
		overlay.render(VIEW, 800, 600, 'param')
		const lines = el.querySelectorAll('polyline')
		expect(lines).toHaveLength(1)
		expect(lines[0].getAttribute('points')?.split(' ')).toHaveLength(5)
		expect(el.querySelectorAll('circle')).toHaveLength(1)
	})

	it('places vertices by the served λ coordinates', () => {
		const el = svg()
		const overlay = new RayOverlay(el, META.planes.param, META.tile_px)
		overlay.setData([RAY_SHORT])
		overlay.render(VIEW, 800, 600, 'param')
		const first = RAY_SHORT.points[0].lambda
		const scale = META.tile_px // zoom 0
		const sx = 400 + ((first[0] - 0) * scale) / META.planes.param.width
		const sy = 300 - ((first[1] - 0) * scale) / META.planes.param.height
		const pts = (el.querySelector('polyline') as SVGPolylineElement)
			.getAttribute('points') as string
		const [gx, gy] = pts.split(' ')[0].split(',').map(Number)
		expect(gx).toBeCloseTo(sx, 9)
		expect(gy).toBeCloseTo(sy, 9)
	})

	it('uses μ coordinates in μ-mode and skips points at ∞', () => {
		const el = svg()
		const overlay = new RayOverlay(el, META.planes.mu, META.tile_px)
		const withInf: RayResponse = {
			...RAY_SHORT,
			points: [
				{ t: -9, lambda: [0, 0], mu: 'inf' },
				...RAY_SHORT.points,
			],
		}
		overlay.setData([withInf])
		overlay.render(VIEW, 800, 600, 'mu')
		const pts = (el.querySelector('polyline') as SVGPolylineElement)
			.getAttribute('points') as string
		expect(pts.split(' ')).toHaveLength(5) // the ∞ vertex is dropped
		const firstMu = RAY_SHORT.points[0].mu as [number, number]
		const sx = 400 + ((firstMu[0] - 0) * META.tile_px) / META.planes.mu.width
		expect(Number(pts.split(' ')[0].split(',')[0])).toBeCloseTo(sx, 9)
	})

	it('clear drops the drawn layer', () => {
		const el = svg()
		const overlay = new RayOverlay(el, META.planes.param, META.tile_px)
		overlay.setData([RAY_SHORT])
		overlay.render(VIEW, 800, 600, 'param')
		expect(el.children.length).toBeGreaterThan(0)
		overlay.clear()
		expect(el.children.length).toBe(0)
	})
})

describe('MarkerOverlay', () => {
	it('marks the root, pole, critical point and σ=±1 pseudo points', () => {
		const el = svg()
		const overlay = new MarkerOverlay(el, META.planes.dyn, META.tile_px)
		overlay.setData(RECORD_CENTER)
		// wide view so every marker of the record is on screen
		overlay.render({ cx: -15, cy: 0, zoom: -4 }, 800, 600)
		const classes = Array.from(el.querySelectorAll('g')).map((g) =>
			g.getAttribute('class'),
		)
		expect(classes).toContain('marker root')
		expect(classes).toContain('marker pole')
		expect(classes).toContain('marker critical')
		expect(classes.filter((c) => c === 'marker pseudo')).toHaveLength(2)
	})

	it('drops far off-screen markers but keeps the rest', () => {
		const el = svg()
		const overlay = new MarkerOverlay(el, META.planes.dyn, META.tile_px)
		overlay.setData(RECORD_CENTER)
		overlay.render({ cx: 1, cy: 0, zoom: 2 }, 300, 200)
		const classes = Array.from(el.querySelectorAll('g')).map((g) =>
			g.getAttribute('class'),
		)
		expect(classes).toContain('marker root')
		// w* ≈ −37.45 is far outside this viewport
		expect(classes).not.toContain('marker critical')
	})

	it('renders nothing without a record', () => {
		const el = svg()
		const overlay = new MarkerOverlay(el, META.planes.dyn, META.tile_px)
		overlay.render(VIEW, 300, 200)
		expect(el.children.length).toBe(0)
	})
})
