/** Client-side sniff: only RIFF/WAVE uploads go to the service. */

export function looksLikeWav(header: ArrayBuffer): boolean {
  if (header.byteLength < 12) return false;
  const bytes = new Uint8Array(header);
  const tag = (offset: number) =>
    String.fromCharCode(bytes[offset], bytes[offset + 1], bytes[offset + 2], bytes[offset + 3]);
  return tag(0) === 'RIFF' && tag(8) === 'WAVE';
}

async function blobBytes(blob: Blob): Promise<ArrayBuffer> {
  if (typeof blob.arrayBuffer === 'function') return blob.arrayBuffer();
  // some DOM implementations ship Blob without arrayBuffer(); go via FileReader
  return new Promise((resolve, reject) => {
    const reader = new FileReader();
    reader.onload = () => resolve(reader.result as ArrayBuffer);
    reader.onerror = () => reject(reader.error);
    reader.readAsArrayBuffer(blob);
  });
}

export async function validateWavFile(file: Blob): Promise<boolean> {
  const head = file.slice(0, 12);
  const buffer = await blobBytes(typeof head.arrayBuffer === 'function' ? head : file);
  return looksLikeWav(buffer.slice(0, 12));
}
