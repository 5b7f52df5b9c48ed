const sigma = require('sigma');
const tau = require('tau');
const upsilon = require('upsilon');
const phi = require('@good/phi/helper');

module.exports = phi.combine(sigma, tau, upsilon);
