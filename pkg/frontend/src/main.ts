import { fetchAnalysis, fetchMeta, fetchRay } from './api'
import { decodeFragment, encodeFragment } from './state'
import type { ExplorerState, ParamPlane } from './state'
import { TileLayer } from './tiles'
import type { View } from './tiles'
import { MarkerOverlay, RayOverlay } from './overlays'
import { renderPanel, renderPanelError } from './panel'
import type { AnalysisRecord, Meta, RayResponse } from './types'

const TWO_PI = 2 * Math.PI
const RAY_SHEETS = [-3, -2, -1, 1, 2, 3]
const RAY_DEPTH = -8
const RAY_SAMPLES = 64
const ZOOM_STEP = 0.25
const CLICK_SLOP_PX = 4
const FALLBACK_W = 800
const FALLBACK_H = 600

function clamp(v: number, lo: number, hi: number): number {
	return Math.max(lo, Math.min(hi, v))
}

// Clicks land in whatever parameter chart is showing. The service only
// answers analyze queries in λ, so a click in the μ chart is pulled back
// through λ = 2πi/(μ−1) purely to form the request URL; every value the
// panel then shows comes from the response.
function lambdaFromMu(mu: [number, number]): [number, number] {
	const a = mu[0] - 1
	const b = mu[1]
	const d = a * a + b * b
	return [(TWO_PI * b) / d, (TWO_PI * a) / d]
}

export class ExplorerApp {
	readonly state: ExplorerState
	private meta: Meta
	private layers: Record<ParamPlane, TileLayer>
	private dynLayer: TileLayer | null = null
	private record: AnalysisRecord | null = null
	private rayData: RayResponse[] | null = null

	private paramViewport: HTMLElement
	private dynViewport: HTMLElement
	private dynPane: HTMLElement
	private panelEl: HTMLElement
	private readout: HTMLElement
	private tabs: Record<ParamPlane, HTMLButtonElement>
	private rayBtn: HTMLButtonElement
	private markerBtn: HTMLButtonElement
	private rayOverlay: RayOverlay
	private markerOverlay: MarkerOverlay

	constructor(root: HTMLElement, meta: Meta, state: ExplorerState) {
		this.meta = meta
		this.state = state
		root.classList.add('explorer')
		root.replaceChildren()

		const toolbar = document.createElement('div')
		toolbar.className = 'toolbar'
		this.tabs = {
			param: this.makeButton(toolbar, 'tab', 'λ-plane', () => this.setPlane('param')),
			mu: this.makeButton(toolbar, 'tab', 'μ-plane', () => this.setPlane('mu')),
		}
		this.rayBtn = this.makeButton(toolbar, 'toggle rays', 'rays', () => {
			void this.toggleRays()
		})
		this.markerBtn = this.makeButton(toolbar, 'toggle markers', 'markers', () =>
			this.toggleMarkers(),
		)
		this.readout = document.createElement('span')
		this.readout.className = 'readout'
		toolbar.appendChild(this.readout)
		root.appendChild(toolbar)

		const main = document.createElement('div')
		main.className = 'main'
		root.appendChild(main)

		this.paramViewport = document.createElement('div')
		this.paramViewport.className = 'viewport param'
		main.appendChild(this.paramViewport)

		this.layers = {
			param: this.makeLayer(this.paramViewport, 'param'),
			mu: this.makeLayer(this.paramViewport, 'mu'),
		}
		const raySvg = document.createElementNS('http://www.w3.org/2000/svg', 'svg')
		raySvg.setAttribute('class', 'overlay rays')
		this.paramViewport.appendChild(raySvg)
		this.rayOverlay = new RayOverlay(raySvg, meta.planes[state.plane], meta.tile_px)

		this.dynPane = document.createElement('aside')
		this.dynPane.className = 'side'
		this.dynPane.hidden = true
		main.appendChild(this.dynPane)

		this.dynViewport = document.createElement('div')
		this.dynViewport.className = 'viewport dyn'
		this.dynPane.appendChild(this.dynViewport)
		const markerSvg = document.createElementNS('http://www.w3.org/2000/svg', 'svg')
		markerSvg.setAttribute('class', 'overlay markers')
		this.dynViewport.appendChild(markerSvg)
		this.markerOverlay = new MarkerOverlay(markerSvg, meta.planes.dyn, meta.tile_px)

		this.panelEl = document.createElement('div')
		this.panelEl.className = 'panel'
		this.panelEl.dataset.state = 'empty'
		this.dynPane.appendChild(this.panelEl)

		this.bindPointer(this.paramViewport, () => this.state.views[this.state.plane], {
			onViewChange: () => this.renderParam(),
			onClick: (px, py) => {
				void this.onParamClick(px, py)
			},
		})
		this.bindPointer(this.dynViewport, () => this.state.views.dyn, {
			onViewChange: () => this.renderDyn(),
		})
	}

	private makeButton(
		parent: HTMLElement,
		cls: string,
		label: string,
		onClick: () => void,
	): HTMLButtonElement {
		const btn = document.createElement('button')
		btn.className = cls
		btn.textContent = label
		btn.addEventListener('click', onClick)
		parent.appendChild(btn)
		return btn
	}

	private makeLayer(host: HTMLElement, plane: ParamPlane): TileLayer {
		const el = document.createElement('div')
		el.className = `layer ${plane}`
		host.appendChild(el)
		return new TileLayer(el, plane, this.meta.planes[plane], this.meta.tile_px, this.meta.max_zoom)
	}

	// pan on drag, zoom on wheel, click (small drags only) to select
	private bindPointer(
		host: HTMLElement,
		view: () => View,
		handlers: { onViewChange: () => void; onClick?: (px: number, py: number) => void },
	): void {
		let dragging = false
		let moved = 0
		let lastX = 0
		let lastY = 0
		host.addEventListener('pointerdown', (e) => {
			dragging = true
			moved = 0
			lastX = e.clientX
			lastY = e.clientY
			host.setPointerCapture?.(e.pointerId)
		})
		host.addEventListener('pointermove', (e) => {
			if (!dragging) return
			const dx = e.clientX - lastX
			const dy = e.clientY - lastY
			lastX = e.clientX
			lastY = e.clientY
			moved += Math.abs(dx) + Math.abs(dy)
			const v = view()
			const win = this.windowFor(host)
			const scale = this.meta.tile_px * 2 ** v.zoom
			v.cx -= (dx * win.width) / scale
			v.cy += (dy * win.height) / scale
			handlers.onViewChange()
			this.updateFragment()
		})
		host.addEventListener('pointerup', (e) => {
			if (!dragging) return
			dragging = false
			if (moved <= CLICK_SLOP_PX && handlers.onClick) {
				const rect = host.getBoundingClientRect()
				handlers.onClick(e.clientX - rect.left, e.clientY - rect.top)
			}
		})
		host.addEventListener('wheel', (e) => {
			e.preventDefault()
			const rect = host.getBoundingClientRect()
			this.zoomAround(
				host,
				view(),
				e.clientX - rect.left,
				e.clientY - rect.top,
				e.deltaY < 0 ? ZOOM_STEP : -ZOOM_STEP,
			)
			handlers.onViewChange()
			this.updateFragment()
		})
	}

	private windowFor(host: HTMLElement) {
		return host === this.dynViewport
			? this.meta.planes.dyn
			: this.meta.planes[this.state.plane]
	}

	private zoomAround(host: HTMLElement, v: View, px: number, py: number, dz: number): void {
		const win = this.windowFor(host)
		const w = host.clientWidth || FALLBACK_W
		const h = host.clientHeight || FALLBACK_H
		const scaleOld = this.meta.tile_px * 2 ** v.zoom
		const x = v.cx + ((px - w / 2) * win.width) / scaleOld
		const y = v.cy - ((py - h / 2) * win.height) / scaleOld
		v.zoom = clamp(v.zoom + dz, 0, this.meta.max_zoom)
		const scale = this.meta.tile_px * 2 ** v.zoom
		v.cx = x - ((px - w / 2) * win.width) / scale
		v.cy = y + ((py - h / 2) * win.height) / scale
	}

	async init(): Promise<void> {
		this.tabs[this.state.plane].classList.add('active')
		this.layers.param.rootEl().style.display = this.state.plane === 'param' ? '' : 'none'
		this.layers.mu.rootEl().style.display = this.state.plane === 'mu' ? '' : 'none'
		this.rayBtn.classList.toggle('on', this.state.rays)
		this.markerBtn.classList.toggle('on', this.state.markers)
		this.renderParam()
		if (this.state.rays) {
			this.rayData = await this.fetchRays()
			this.rayOverlay.setData(this.rayData)
			this.renderParam()
		}
		if (this.state.lambda) {
			await this.selectLambda(this.state.lambda)
		}
		this.updateFragment()
	}

	private async onParamClick(px: number, py: number): Promise<void> {
		const host = this.paramViewport
		const w = host.clientWidth || FALLBACK_W
		const h = host.clientHeight || FALLBACK_H
		const view = this.state.views[this.state.plane]
		const pt = this.layers[this.state.plane].planeAt(view, w, h, px, py)
		const lam = this.state.plane === 'mu' ? lambdaFromMu(pt) : pt
		await this.selectLambda(lam)
	}

	async selectLambda(lam: [number, number]): Promise<void> {
		this.state.lambda = lam
		this.updateFragment()
		this.panelEl.dataset.state = 'loading'
		this.readout.textContent = `λ = ${lam[0]}, ${lam[1]}`
		try {
			const record = await fetchAnalysis(lam)
			if (this.state.lambda !== lam) return // superseded by a newer click
			this.record = record
			this.state.dynOpen = true
			this.dynPane.hidden = false
			renderPanel(this.panelEl, record)
			if (!this.dynLayer) {
				const el = document.createElement('div')
				el.className = 'layer dyn'
				this.dynViewport.insertBefore(el, this.dynViewport.firstChild)
				this.dynLayer = new TileLayer(
					el,
					'dyn',
					this.meta.planes.dyn,
					this.meta.tile_px,
					this.meta.max_zoom,
					lam,
				)
			} else {
				this.dynLayer.setLambda(lam)
			}
			this.markerOverlay.setData(this.state.markers ? record : null)
			this.renderDyn()
		} catch (err) {
			if (this.state.lambda !== lam) return
			this.record = null
			this.state.dynOpen = false
			this.dynPane.hidden = false // keep the pane so the badge is visible
			this.dynLayer?.clear()
			this.markerOverlay.clear()
			renderPanelError(this.panelEl, err)
		}
		this.updateFragment()
	}

	setPlane(plane: ParamPlane): void {
		if (plane === this.state.plane) return
		this.state.plane = plane
		this.tabs.param.classList.toggle('active', plane === 'param')
		this.tabs.mu.classList.toggle('active', plane === 'mu')
		this.layers.param.rootEl().style.display = plane === 'param' ? '' : 'none'
		this.layers.mu.rootEl().style.display = plane === 'mu' ? '' : 'none'
		this.rayOverlay.setWindow(this.meta.planes[plane])
		this.renderParam()
		this.updateFragment()
	}

	private async toggleRays(): Promise<void> {
		this.state.rays = !this.state.rays
		this.rayBtn.classList.toggle('on', this.state.rays)
		this.updateFragment()
		if (!this.state.rays) {
			this.rayOverlay.clear() // drops the overlay only; tiles are untouched
			return
		}
		try {
			if (!this.rayData) this.rayData = await this.fetchRays()
		} catch {
			this.state.rays = false
			this.rayBtn.classList.remove('on')
			this.updateFragment()
			return
		}
		this.rayOverlay.setData(this.rayData)
		this.renderParam()
	}

	private toggleMarkers(): void {
		this.state.markers = !this.state.markers
		this.markerBtn.classList.toggle('on', this.state.markers)
		this.updateFragment()
		this.markerOverlay.setData(this.state.markers ? this.record : null)
		this.renderDyn()
	}

	// the argument-zero rays of both attracting-end regions, one request
	// per sheet (the k = 0 sheet has no landing and is skipped)
	private fetchRays(): Promise<RayResponse[]> {
		const jobs: Promise<RayResponse>[] = []
		for (const region of ['omega-minus', 'omega-plus']) {
			for (const k of RAY_SHEETS) {
				jobs.push(fetchRay(region, 0, k, RAY_DEPTH, RAY_SAMPLES))
			}
		}
		return Promise.all(jobs)
	}

	renderParam(): void {
		const w = this.paramViewport.clientWidth || FALLBACK_W
		const h = this.paramViewport.clientHeight || FALLBACK_H
		const view = this.state.views[this.state.plane]
		this.layers[this.state.plane].render(view, w, h)
		this.rayOverlay.render(view, w, h, this.state.plane)
	}

	renderDyn(): void {
		if (!this.dynLayer) return
		const w = this.dynViewport.clientWidth || FALLBACK_W
		const h = this.dynViewport.clientHeight || FALLBACK_H
		this.dynLayer.render(this.state.views.dyn, w, h)
		this.markerOverlay.render(this.state.views.dyn, w, h)
	}

	updateFragment(): void {
		history.replaceState(null, '', `#${encodeFragment(this.state)}`)
	}

	panel(): HTMLElement {
		return this.panelEl
	}

	dynPaneEl(): HTMLElement {
		return this.dynPane
	}
}

export async function bootExplorer(
	root: HTMLElement,
	hash: string = location.hash,
): Promise<ExplorerApp> {
	const meta = await fetchMeta()
	const app = new ExplorerApp(root, meta, decodeFragment(hash))
	await app.init()
	return app
}

const mount = document.getElementById('app')
if (mount) {
	void bootExplorer(mount)
}
