const nu = require('nu');
const xi = require('xi');
const omicron = require('omicron');
const pi = require('pi');
const paint = require('chalk');

module.exports = paint.green(nu.add(xi, omicron, pi));
