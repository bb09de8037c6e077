import { tileUrl } from './api'
import type { PlaneWindow } from './types'

const TILE_CACHE_LIMIT = 400

export interface View {
	cx: number
	cy: number
	zoom: number
}

// Slippy-tile layer over one plane of the service. Tiles render at the
// nearest integer level and are CSS-scaled by 2^(zoom - level) for
// fractional zooms; pan/zoom only repositions <img> elements, it never
// rewrites a fetched tile. Off-screen in-flight loads are cancelled by
// clearing img.src; completed tiles stay in an LRU keyed by tile address.
export class TileLayer {
	private cache = new Map<string, HTMLImageElement>()
	private visible = new Set<string>()

	constructor(
		private root: HTMLElement,
		private plane: string,
		private win: PlaneWindow,
		private tilePx: number,
		private maxZoom: number,
		public lambda?: [number, number],
	) {
		root.style.position = 'absolute'
		root.style.inset = '0'
		root.style.overflow = 'hidden'
	}

	level(zoom: number): number {
		return Math.max(0, Math.min(this.maxZoom, Math.round(zoom)))
	}

	// plane coords -> continuous tile coords at integer level
	tileCoords(x: number, y: number, level: number): [number, number] {
		const n = 2 ** level
		return [
			((x - this.win.x_min) / this.win.width) * n,
			((this.win.y_max - y) / this.win.height) * n,
		]
	}

	// screen pixel (relative to layer) -> plane coords
	planeAt(view: View, w: number, h: number, px: number, py: number): [number, number] {
		const scale = this.tilePx * 2 ** view.zoom
		return [
			view.cx + ((px - w / 2) * this.win.width) / scale,
			view.cy - ((py - h / 2) * this.win.height) / scale,
		]
	}

	private key(level: number, ix: number, iy: number): string {
		const lam = this.lambda ? `@${this.lambda[0]},${this.lambda[1]}` : ''
		return `${this.plane}/${level}/${ix}/${iy}${lam}`
	}

	render(view: View, w: number, h: number): void {
		const level = this.level(view.zoom)
		const cssScale = 2 ** (view.zoom - level)
		const tileScreen = this.tilePx * cssScale
		const n = 2 ** level
		const [tcx, tcy] = this.tileCoords(view.cx, view.cy, level)

		const ix0 = Math.max(0, Math.floor(tcx - w / 2 / tileScreen))
		const ix1 = Math.min(n - 1, Math.floor(tcx + w / 2 / tileScreen))
		const iy0 = Math.max(0, Math.floor(tcy - h / 2 / tileScreen))
		const iy1 = Math.min(n - 1, Math.floor(tcy + h / 2 / tileScreen))

		const wanted = new Set<string>()
		for (let iy = iy0; iy <= iy1; iy++) {
			for (let ix = ix0; ix <= ix1; ix++) {
				const k = this.key(level, ix, iy)
				wanted.add(k)
				let img = this.cache.get(k)
				if (!img) {
					img = document.createElement('img')
					img.decoding = 'async'
					img.draggable = false
					img.style.position = 'absolute'
					img.style.imageRendering = 'pixelated'
					img.src = tileUrl(this.plane, level, ix, iy, this.lambda)
					img.dataset.key = k
					this.cache.set(k, img)
					this.trimCache()
				} else {
					// LRU bump
					this.cache.delete(k)
					this.cache.set(k, img)
					if (!img.hasAttribute('src')) {
						img.src = tileUrl(this.plane, level, ix, iy, this.lambda)
					}
				}
				const left = w / 2 + (ix - tcx) * tileScreen
				const top = h / 2 + (iy - tcy) * tileScreen
				img.style.left = `${left}px`
				img.style.top = `${top}px`
				img.style.width = `${tileScreen}px`
				img.style.height = `${tileScreen}px`
				if (!img.isConnected) this.root.appendChild(img)
			}
		}

		for (const k of this.visible) {
			if (!wanted.has(k)) {
				const img = this.cache.get(k)
				if (img) {
					// cancel a still-loading fetch (src='' would reflect the
					// page URL back and wedge the re-arm check)
					if (!img.complete) img.removeAttribute('src')
					img.remove()
				}
			}
		}
		this.visible = wanted
	}

	private trimCache(): void {
		while (this.cache.size > TILE_CACHE_LIMIT) {
			const oldest = this.cache.keys().next().value as string
			const img = this.cache.get(oldest)
			if (img && this.visible.has(oldest)) break // never drop on-screen tiles
			this.cache.delete(oldest)
			img?.remove()
		}
	}

	setLambda(lambda: [number, number] | undefined): void {
		this.lambda = lambda
		this.clear()
	}

	clear(): void {
		for (const img of this.cache.values()) {
			if (!img.complete) img.removeAttribute('src')
			img.remove()
		}
		this.cache.clear()
		this.visible.clear()
	}

	cachedCount(): number {
		return this.cache.size
	}

	rootEl(): HTMLElement {
		return this.root
	}
}
